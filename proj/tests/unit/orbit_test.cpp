#include <random>

#include <gtest/gtest.h>

#include "corrdyn/error.hpp"
#include "corrdyn/orbit.hpp"

namespace corrdyn {
namespace {

// Exhaustive tree search, independent of the pruned engine.
bool has_bounded_path(const RationalExp& exp, Cx c, Cx z, int remaining, double radius) {
  if (std::abs(z) > radius) return false;
  if (remaining == 1) return true;
  const double mod = std::pow(std::abs(z), exp.beta());
  const double arg = exp.p() * std::arg(z);
  for (int k = 0; k < exp.q(); ++k) {
    const Cx w = c + std::polar(mod, (arg + kTwoPi * k) / exp.q());
    if (has_bounded_path(exp, c, w, remaining - 1, radius)) return true;
  }
  return false;
}

TEST(Orbit, EscapeRadiusFormula) {
  const PowerCorr a{RationalExp(5, 2), Cx{0.05}};
  EXPECT_DOUBLE_EQ(escape_radius(a), std::pow(2.0, 1.0 / 1.5));
  const PowerCorr b{RationalExp(5, 4), Cx{26.0}};
  EXPECT_DOUBLE_EQ(escape_radius(b), 52.0);
}

TEST(Orbit, TrappingRadiusSolvesItsEquation) {
  for (const double mag : {0.0, 0.05, 1.0, 26.0}) {
    const PowerCorr corr{RationalExp(5, 4), Cx{mag}};
    const double r = trapping_radius(corr);
    EXPECT_GE(r, 1.0);
    EXPECT_GE(std::pow(r, 1.25) - r, mag - 1e-9);
    if (mag > 0.0) EXPECT_LT(std::pow(r * (1 - 1e-9), 1.25) - r * (1 - 1e-9), mag);
    EXPECT_LE(r, escape_radius(corr));
  }
}

TEST(Orbit, UnitCircleSeparatesAtZeroParameter) {
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  const EscapeParams params = default_escape_params(corr);
  for (int k = 0; k < 16; ++k) {
    const Cx u = std::polar(1.0, kTwoPi * k / 16 + 0.1);
    EXPECT_EQ(in_filled_julia(corr, 0.98 * u, params).status, OrbitStatus::Bounded);
    EXPECT_EQ(in_filled_julia(corr, 1.02 * u, params).status, OrbitStatus::Escaped);
  }
}

TEST(Orbit, WitnessIsAnOrbit) {
  const PowerCorr corr{RationalExp(5, 4), Cx{0.3, 0.2}};
  EscapeParams params = default_escape_params(corr);
  params.max_depth = 30;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  int bounded = 0;
  for (int i = 0; i < 200; ++i) {
    const Cx z{u(rng), u(rng)};
    const OrbitVerdict v = in_filled_julia(corr, z, params);
    if (v.status != OrbitStatus::Bounded) continue;
    ++bounded;
    ASSERT_EQ(v.witness.size(), 30u);
    EXPECT_EQ(v.witness.front(), z);
    for (std::size_t k = 1; k < v.witness.size(); ++k) {
      EXPECT_LT(power_relation_residual(corr, v.witness[k - 1], v.witness[k]), 1e-10);
      EXPECT_LE(std::abs(v.witness[k]), params.radius);
    }
  }
  EXPECT_GT(bounded, 0);
}

TEST(Orbit, AgreesWithExhaustiveSearchAtShallowDepth) {
  const RationalExp exp(5, 2);
  const Cx c{-0.3, 0.4};
  const PowerCorr corr{exp, c};
  EscapeParams params = default_escape_params(corr);
  params.max_depth = 7;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.6, 1.6);
  for (int i = 0; i < 300; ++i) {
    const Cx z{u(rng), u(rng)};
    const bool expected = has_bounded_path(exp, c, z, params.max_depth, params.radius);
    const OrbitStatus got = in_filled_julia(corr, z, params).status;
    EXPECT_EQ(got == OrbitStatus::Bounded, expected) << z;
  }
}

TEST(Orbit, PointsBeyondEscapeRadiusEscape) {
  const PowerCorr corr{RationalExp(3, 2), Cx{0.5, -0.5}};
  const EscapeParams params = default_escape_params(corr);
  for (int k = 0; k < 12; ++k) {
    const Cx z = std::polar(params.radius * 1.01, kTwoPi * k / 12);
    EXPECT_EQ(in_filled_julia(corr, z, params).status, OrbitStatus::Escaped);
  }
}

TEST(Orbit, BudgetExhaustion) {
  const PowerCorr corr{RationalExp(5, 4), Cx{0.2}};
  EscapeParams params = default_escape_params(corr);
  params.node_budget = 3;
  const OrbitVerdict v = in_filled_julia(corr, Cx{0.5, 0.5}, params);
  EXPECT_EQ(v.status, OrbitStatus::BudgetExhausted);
}

TEST(Orbit, InvalidParameters) {
  const PowerCorr corr{RationalExp(5, 2), Cx{0.05}};
  EscapeParams params = default_escape_params(corr);
  params.max_depth = 0;
  EXPECT_THROW(in_filled_julia(corr, Cx{}, params), Error);
  params = default_escape_params(corr);
  params.radius = 0.5;
  EXPECT_THROW(in_filled_julia(corr, Cx{}, params), Error);
}

TEST(Orbit, OmegaSampleOfSuperattractingBasin) {
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  EscapeParams params = default_escape_params(corr);
  params.max_depth = 20;
  const OmegaSample s = omega_limit_sample(corr, Cx{0.5, 0.1}, params, 5);
  ASSERT_FALSE(s.points.empty());
  for (const Cx z : s.points) EXPECT_LT(std::abs(z), 1e-3);
  EXPECT_THROW(omega_limit_sample(corr, Cx{0.5}, params, 0), Error);
  EXPECT_THROW(omega_limit_sample(corr, Cx{0.5}, params, 20), Error);
}

TEST(Orbit, BasinCheckAroundZero) {
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  EscapeParams params = default_escape_params(corr);
  params.max_depth = 20;
  std::vector<Cx> samples;
  for (int k = 0; k < 20; ++k) samples.push_back(std::polar(0.1 + 0.04 * k, 0.7 * k));
  const std::vector<Cx> attractor{Cx{}};
  EXPECT_DOUBLE_EQ(basin_check(corr, attractor, samples, params), 1.0);
  const std::vector<Cx> wrong{Cx{5.0}};
  EXPECT_LT(basin_check(corr, wrong, samples, params), 0.5);
}

}  // namespace
}  // namespace corrdyn
