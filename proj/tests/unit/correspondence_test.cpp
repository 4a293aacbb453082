#include <random>

#include <gtest/gtest.h>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/error.hpp"

namespace corrdyn {
namespace {

// The defining relations written out directly.
Cx original_relation(Cx a, Cx z, Cx w) {
  const Cx x = (a * z + 1.0) / (z + 1.0);
  const Cx y = (a * w - 1.0) / (w - 1.0);
  return x * x + x * y + y * y - 3.0;
}

Cx covj_relation(Cx a, Cx z, Cx w) {
  // w = J(y) with J the involution fixing 1 and a, so y = J(w).
  const Cx y = ((1.0 + a) * w - 2.0 * a) / (2.0 * w - (1.0 + a));
  return z * z + z * y + y * y - 3.0;
}

std::vector<Cx> random_points(int n, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<Cx> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

TEST(RationalExp, RejectsNonExpanding) {
  EXPECT_THROW(RationalExp(2, 3), Error);
  EXPECT_THROW(RationalExp(2, 2), Error);
  EXPECT_THROW(RationalExp(3, 0), Error);
  const RationalExp e(4, 2);
  EXPECT_EQ(e.p(), 4);
  EXPECT_EQ(e.q(), 2);
  EXPECT_DOUBLE_EQ(e.beta(), 2.0);
}

TEST(PowerCorr, ForwardImagesSatisfyRelation) {
  for (const auto [p, q] : {std::pair{5, 2}, std::pair{3, 2}, std::pair{5, 4}, std::pair{7, 3}}) {
    const PowerCorr corr{RationalExp(p, q), Cx{0.3, -0.2}};
    for (const Cx z : random_points(50, 2.0, 1)) {
      const BranchSet set = power_forward(corr, z);
      ASSERT_EQ(set.images.size(), static_cast<std::size_t>(q));
      for (std::size_t i = 0; i < set.images.size(); ++i) {
        const Cx w = set.images[i].value;
        EXPECT_LT(std::abs(std::pow(w - corr.c, q) - std::pow(z, p)), 1e-10 * std::max(1.0, std::pow(std::abs(z), p)));
        EXPECT_LT(power_relation_residual(corr, z, w), 1e-12);
        for (std::size_t j = 0; j < i; ++j)
          EXPECT_GT(std::abs(w - set.images[j].value), 1e-9);
      }
      // Ordered by argument of w - c in [0, 2 pi).
      for (std::size_t i = 1; i < set.images.size(); ++i) {
        double a0 = std::arg(set.images[i - 1].value - corr.c);
        double a1 = std::arg(set.images[i].value - corr.c);
        if (a0 < 0) a0 += kTwoPi;
        if (a1 < 0) a1 += kTwoPi;
        EXPECT_LT(a0, a1);
      }
    }
  }
}

TEST(PowerCorr, ForwardDerivativeMatchesFiniteDifference) {
  const PowerCorr corr{RationalExp(5, 2), Cx{0.1, 0.05}};
  const double h = 1e-6;
  for (const Cx z : random_points(20, 1.5, 2)) {
    if (std::abs(z) < 0.2) continue;
    const BranchSet at = power_forward(corr, z);
    const BranchSet near = power_forward(corr, z + h);
    for (const Branch& b : at.images) {
      // The branch continues to the nearest image.
      Cx best = near.images.front().value;
      for (const Branch& n : near.images)
        if (std::abs(n.value - b.value) < std::abs(best - b.value)) best = n.value;
      ASSERT_TRUE(b.derivative);
      EXPECT_LT(std::abs((best - b.value) / h - *b.derivative), 1e-4 * std::abs(*b.derivative));
    }
  }
}

TEST(PowerCorr, BackwardPreimagesSatisfyRelation) {
  const PowerCorr corr{RationalExp(5, 2), Cx{-0.4, 0.1}};
  for (const Cx w : random_points(50, 2.0, 3)) {
    const BranchSet set = power_backward(corr, w);
    ASSERT_EQ(set.images.size(), 5u);
    for (const Branch& b : set.images) EXPECT_LT(power_relation_residual(corr, b.value, w), 1e-12);
  }
}

TEST(PowerCorr, CriticalPointHasSingleImage) {
  const PowerCorr corr{RationalExp(3, 2), Cx{0.25}};
  const BranchSet f = power_forward(corr, Cx{});
  ASSERT_EQ(f.images.size(), 1u);
  EXPECT_EQ(f.images[0].value, Cx{0.25});
  EXPECT_FALSE(f.images[0].derivative);
  const BranchSet b = power_backward(corr, Cx{0.25});
  ASSERT_EQ(b.images.size(), 1u);
  EXPECT_EQ(b.images[0].value, Cx{});
}

TEST(PowerCorr, FixedPointsAtZeroParameter) {
  // (z)^q = z^p: z = 0 and the (p - q)-th roots of unity, multiplier beta.
  const PowerCorr corr{RationalExp(5, 2), Cx{}};
  const auto fps = fixed_points(corr);
  int on_circle = 0;
  for (const FixedPoint& fp : fps) {
    if (std::abs(fp.point) < 1e-9) continue;
    ++on_circle;
    EXPECT_NEAR(std::abs(fp.point), 1.0, 1e-10);
    EXPECT_NEAR(std::abs(std::pow(fp.point, 3) - 1.0), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(fp.multiplier), 2.5, 1e-9);
    EXPECT_EQ(fp.kind, FixedPointClass::Repelling);
  }
  EXPECT_EQ(on_circle, 3);
}

TEST(PowerCorr, FixedPointsSolveRelation) {
  const PowerCorr corr{RationalExp(5, 4), Cx{0.3, 0.7}};
  const auto fps = fixed_points(corr);
  EXPECT_FALSE(fps.empty());
  for (const FixedPoint& fp : fps) EXPECT_LT(power_relation_residual(corr, fp.point, fp.point), 1e-9);
}

TEST(Multiplier, Classification) {
  EXPECT_EQ(classify_multiplier(Cx{}), FixedPointClass::Superattracting);
  EXPECT_EQ(classify_multiplier(Cx{0.5}), FixedPointClass::Attracting);
  EXPECT_EQ(classify_multiplier(std::polar(1.0, 0.3)), FixedPointClass::Parabolic);
  EXPECT_EQ(classify_multiplier(Cx{1.0 + 1e-10}), FixedPointClass::Parabolic);
  EXPECT_EQ(classify_multiplier(Cx{0.0, 1.5}), FixedPointClass::Repelling);
}

TEST(Mating, CoordinateChangesAreInverse) {
  const Cx a{4.56, 0.42};
  for (const Cx z : random_points(30, 3.0, 4)) {
    const RiemannPoint zeta = to_covj(a, z);
    ASSERT_FALSE(zeta.is_infinity());
    const RiemannPoint back = from_covj(a, zeta.value());
    ASSERT_FALSE(back.is_infinity());
    EXPECT_LT(std::abs(back.value() - z), 1e-12 * std::max(1.0, std::abs(z)));
  }
  EXPECT_TRUE(to_covj(a, Cx{-1.0}).is_infinity());
  EXPECT_TRUE(from_covj(a, a).is_infinity());
  // P = 0 in Original coordinates is 1 in CovJ coordinates.
  EXPECT_LT(std::abs(to_covj(a, Cx{}).value() - 1.0), 1e-15);
}

TEST(Mating, InvolutionFixesOneAndA) {
  const Cx a{5.2, -0.7};
  EXPECT_LT(std::abs(involution_j(a, Cx{1.0}).value() - 1.0), 1e-12);
  EXPECT_LT(std::abs(involution_j(a, a).value() - a), 1e-12);
  for (const Cx z : random_points(30, 3.0, 5)) {
    const RiemannPoint jz = involution_j(a, z);
    if (jz.is_infinity()) continue;
    const RiemannPoint jjz = involution_j(a, jz.value());
    ASSERT_FALSE(jjz.is_infinity());
    EXPECT_LT(std::abs(jjz.value() - z), 1e-10 * std::max(1.0, std::abs(z)));
  }
}

TEST(Mating, ImagesSatisfyRelationInBothCoordinates) {
  const Cx a{4.56, 0.42};
  const MatingCorr original(a, MatingCoords::Original);
  const MatingCorr covj(a, MatingCoords::CovJ);
  for (const Cx z : random_points(50, 2.0, 6)) {
    const BranchSet f = mating_forward(original, z);
    EXPECT_EQ(f.images.size() + f.images_at_infinity, 2u);
    for (const Branch& b : f.images) {
      EXPECT_LT(std::abs(original_relation(a, z, b.value)), 1e-8 * std::max(1.0, std::norm(b.value)));
      EXPECT_LT(mating_relation_residual(original, z, b.value), 1e-12);
    }
    const BranchSet g = mating_forward(covj, z);
    for (const Branch& b : g.images) EXPECT_LT(std::abs(covj_relation(a, z, b.value)), 1e-8 * std::max(1.0, std::norm(z)));
    const BranchSet back = mating_backward(original, z);
    for (const Branch& b : back.images) EXPECT_LT(mating_relation_residual(original, b.value, z), 1e-12);
  }
}

TEST(Mating, CoordinateSystemsAreConjugate) {
  const Cx a{5.0, 0.3};
  const MatingCorr original(a, MatingCoords::Original);
  const MatingCorr covj(a, MatingCoords::CovJ);
  for (const Cx z : random_points(30, 2.0, 7)) {
    const BranchSet f = mating_forward(original, z);
    const BranchSet g = mating_forward(covj, to_covj(a, z).value());
    ASSERT_EQ(f.images.size(), g.images.size());
    for (const Branch& b : f.images) {
      const Cx image = to_covj(a, b.value).value();
      double best = 1e300;
      for (const Branch& c : g.images) best = std::min(best, std::abs(c.value - image));
      EXPECT_LT(best, 1e-8 * std::max(1.0, std::abs(image)));
    }
  }
}

TEST(Mating, ForwardDerivativeMatchesFiniteDifference) {
  const MatingCorr corr(Cx{4.56, 0.42});
  const double h = 1e-6;
  for (const Cx z : random_points(20, 1.0, 8)) {
    const BranchSet at = mating_forward(corr, z);
    const BranchSet near = mating_forward(corr, z + h);
    if (at.branch_point) continue;
    for (const Branch& b : at.images) {
      Cx best = near.images.front().value;
      for (const Branch& n : near.images)
        if (std::abs(n.value - b.value) < std::abs(best - b.value)) best = n.value;
      ASSERT_TRUE(b.derivative);
      EXPECT_LT(std::abs((best - b.value) / h - *b.derivative), 1e-4 * std::max(1.0, std::abs(*b.derivative)));
    }
  }
}

TEST(Mating, PolesAndInvalidParameter) {
  EXPECT_THROW(MatingCorr(Cx{1.0}), Error);
  const MatingCorr corr(Cx{5.0});
  try {
    mating_forward(corr, Cx{-1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PoleInput);
  }
  EXPECT_THROW(mating_backward(corr, Cx{1.0}), Error);
}

TEST(Mating, ParabolicPointHasUnitMultiplier) {
  for (const Cx a : {Cx{5.0}, Cx{4.56, 0.42}, Cx{6.5}}) {
    const auto fps = fixed_points(MatingCorr(a));
    bool found = false;
    for (const FixedPoint& fp : fps)
      if (std::abs(fp.point) < 1e-9) {
        found = true;
        EXPECT_LT(std::abs(fp.multiplier - 1.0), 1e-9);
        EXPECT_EQ(fp.kind, FixedPointClass::Parabolic);
      }
    EXPECT_TRUE(found) << a;
    for (const FixedPoint& fp : fps)
      EXPECT_LT(mating_relation_residual(MatingCorr(a), fp.point, fp.point), 1e-9);
  }
}

}  // namespace
}  // namespace corrdyn
