#include <random>

#include <gtest/gtest.h>

#include "corrdyn/error.hpp"
#include "corrdyn/limit_set.hpp"

namespace corrdyn {
namespace {

const Cx kRabbitA{4.56, 0.42};

TEST(Domains, ParameterMustLieInDisk) {
  for (const Cx a : {Cx{8.0}, Cx{1.0}, Cx{4.0, 3.5}}) {
    try {
      standard_domains(a);
      FAIL() << a;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::OutsideDisk);
    }
  }
  EXPECT_NO_THROW(standard_domains(Cx{7.0}));
}

TEST(Domains, CircleThroughOneAndParameterTangentAtP) {
  for (const Cx a : {Cx{5.0}, kRabbitA, Cx{6.5}, Cx{4.0, 2.5}}) {
    const FundamentalDomains d = standard_domains(a);
    EXPECT_NEAR(std::abs(Cx{1.0} - d.j_circle.center), d.j_circle.radius, 1e-12);
    EXPECT_NEAR(std::abs(a - d.j_circle.center), d.j_circle.radius, 1e-9 * std::abs(a));
    EXPECT_NEAR(d.j_circle.center.imag(), 0.0, 1e-15);
    EXPECT_LT(line_angle_degrees(d.cov_tangent, d.j_tangent), 1e-9);
  }
  const FundamentalDomains real = standard_domains(Cx{5.0});
  EXPECT_NEAR(real.j_circle.center.real(), 3.0, 1e-12);
  EXPECT_NEAR(real.j_circle.radius, 2.0, 1e-12);
}

TEST(Domains, CovDomainIsRightOfHyperbola) {
  const FundamentalDomains d = standard_domains(Cx{5.0});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const Cx z{u(rng), u(rng)};
    const double h = z.real() * z.real() - z.imag() * z.imag() / 3.0;
    if (std::abs(h - 1.0) < 1e-6) continue;
    const bool expected = z.real() > 0.0 && h > 1.0;
    EXPECT_EQ(d.in_cov_domain(RiemannPoint(z)), expected) << z;
  }
  for (const Cx b : d.cov_boundary) {
    const double h = b.real() * b.real() - b.imag() * b.imag() / 3.0;
    EXPECT_NEAR(h, 1.0, 1e-6 * std::max(1.0, std::norm(b)));
  }
  EXPECT_FALSE(d.in_cov_domain(RiemannPoint::infinity()));
}

TEST(Domains, LineAngles) {
  EXPECT_NEAR(line_angle_degrees(Cx{1.0}, Cx{0.0, 1.0}), 90.0, 1e-12);
  EXPECT_NEAR(line_angle_degrees(Cx{1.0}, Cx{1.0, 1.0}), 45.0, 1e-12);
  EXPECT_NEAR(line_angle_degrees(Cx{1.0}, Cx{-2.0}), 0.0, 1e-12);
  EXPECT_NEAR(line_angle_degrees(Cx{1.0, 1.0}, Cx{-1.0, 1.0}), 90.0, 1e-12);
}

TEST(Klein, StandardPairPasses) {
  for (const Cx a : {Cx{5.0}, kRabbitA}) {
    const KleinReport r = klein_check(standard_domains(a), 10000);
    EXPECT_TRUE(r.passed) << a << " failures " << r.failures;
    EXPECT_EQ(r.samples, 10000u);
    EXPECT_GT(r.covered_fraction, 0.999);
  }
}

TEST(Klein, ShrunkCircleFails) {
  FundamentalDomains d = standard_domains(Cx{5.0});
  d.j_circle.radius *= 0.8;
  const KleinReport r = klein_check(d, 10000);
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.failures, 0u);
}

TEST(LimitSet, ParabolicPointBelongsToBoth) {
  const MatingCorr corr(kRabbitA);
  const FundamentalDomains d = standard_domains(kRabbitA);
  EXPECT_EQ(in_lambda_plus(corr, d, Cx{}, 24), ChainResult::Member);
  EXPECT_EQ(in_lambda_minus(corr, d, Cx{}, 24), ChainResult::Member);
}

TEST(LimitSet, PlusMembershipIsMonotoneInDepth) {
  const MatingCorr corr(kRabbitA);
  const FundamentalDomains d = standard_domains(kRabbitA);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  int members = 0;
  for (int i = 0; i < 400; ++i) {
    const Cx z{u(rng), 0.3 * u(rng)};
    bool prev = true;
    for (const int depth : {4, 8, 12, 16, 20}) {
      const bool now = in_lambda_plus(corr, d, z, depth) == ChainResult::Member;
      if (!prev) EXPECT_FALSE(now) << z << " depth " << depth;
      prev = now;
    }
    members += prev ? 1 : 0;
  }
  EXPECT_GT(members, 0);
}

TEST(LimitSet, InvolutionMapsMinusOntoPlus) {
  // In Original coordinates J is z -> -z.
  const MatingCorr corr(kRabbitA);
  const FundamentalDomains d = standard_domains(kRabbitA);
  const auto render = render_limit_sets(kRabbitA, GridSpec{Cx{}, 1.0, 256, 256}, 24, MatingCoords::Original);
  std::vector<Cx> minus;
  for (int y = 0; y < 256; ++y)
    for (int x = 0; x < 256; ++x)
      if (render.raster.at(x, y) == LimitLabel::LambdaMinus) minus.push_back(render.raster.grid.pixel_center(x, y));
  ASSERT_GT(minus.size(), 100u);
  std::mt19937_64 rng(9);
  std::shuffle(minus.begin(), minus.end(), rng);
  if (minus.size() > 1000) minus.resize(1000);
  std::size_t hits = 0;
  for (const Cx z : minus) hits += in_lambda_plus(corr, d, -z, 24) == ChainResult::Member ? 1 : 0;
  EXPECT_GE(static_cast<double>(hits), 0.99 * static_cast<double>(minus.size()));
}

TEST(LimitSet, SymmetryAndContactNearP) {
  const auto render = render_limit_sets(kRabbitA, GridSpec{Cx{}, 1.0, 256, 256}, 24, MatingCoords::Original);
  const SymmetryReport sym = j_symmetry(render);
  EXPECT_GT(sym.minus_pixels, 0u);
  EXPECT_GT(sym.plus_pixels, 0u);
  EXPECT_LE(sym.fraction, 0.02);
  EXPECT_LE(sym.max_contact_distance, 4.0 * render.raster.grid.step());
}

TEST(LimitSet, CoordinateSystemsAgree) {
  const MatingCorr original(kRabbitA, MatingCoords::Original);
  const MatingCorr covj(kRabbitA, MatingCoords::CovJ);
  const FundamentalDomains d = standard_domains(kRabbitA);
  const GridSpec grid{Cx{}, 1.0, 96, 96};
  const auto render = render_limit_sets(kRabbitA, grid, 20, MatingCoords::Original);
  std::size_t agree = 0;
  for (int y = 0; y < 96; ++y)
    for (int x = 0; x < 96; ++x) {
      const RiemannPoint zeta = to_covj(kRabbitA, grid.pixel_center(x, y));
      const LimitLabel other = limit_label_at(covj, d, zeta.value(), 20, {});
      agree += other == render.raster.at(x, y) ? 1 : 0;
    }
  EXPECT_GE(static_cast<double>(agree), 0.98 * static_cast<double>(grid.size()));
  (void)original;
}

TEST(LimitSet, WorkerCountDoesNotChangeOutput) {
  WorkerPool pool(4);
  const GridSpec grid{Cx{}, 1.0, 64, 64};
  const auto a = render_limit_sets(kRabbitA, grid, 16, MatingCoords::Original);
  const auto b = render_limit_sets(kRabbitA, grid, 16, MatingCoords::Original, {}, pool);
  EXPECT_EQ(a.raster.labels, b.raster.labels);
}

}  // namespace
}  // namespace corrdyn
