#include <numeric>

#include <gtest/gtest.h>

#include "corrdyn/error.hpp"
#include "corrdyn/sturmian.hpp"

namespace corrdyn {
namespace {

bool is_rotation_of(const std::string& a, const std::string& b) {
  return a.size() == b.size() && (b + b).find(a) != std::string::npos;
}

// Cyclic balance by brute force over all factor lengths and starts.
bool balanced_brute(const std::string& w) {
  const std::size_t n = w.size();
  for (std::size_t len = 1; len <= n; ++len) {
    int lo = 1 << 30, hi = -1;
    for (std::size_t s = 0; s < n; ++s) {
      int ones = 0;
      for (std::size_t k = 0; k < len; ++k) ones += w[(s + k) % n] == '1';
      lo = std::min(lo, ones);
      hi = std::max(hi, ones);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

TEST(Sturmian, GroundTruthWords) {
  EXPECT_TRUE(is_rotation_of(sturmian_word(1, 3).binary(), "001"));
  EXPECT_TRUE(is_rotation_of(sturmian_word(2, 5).binary(), "00101"));
  EXPECT_EQ(sturmian_word(1, 2).binary(), "01");
}

TEST(Sturmian, LengthCountAndBalanceUpToFifty) {
  for (int q = 2; q <= 50; ++q)
    for (int p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Word w = sturmian_word(p, q);
      ASSERT_EQ(w.size(), static_cast<std::size_t>(q));
      EXPECT_EQ(w.count(Letter::Alpha), static_cast<std::size_t>(p));
      EXPECT_TRUE(is_balanced(w));
      EXPECT_TRUE(balanced_brute(w.binary())) << p << "/" << q;
      EXPECT_EQ(w, w.least_rotation());
    }
}

TEST(Sturmian, BalancedWordIsUniqueUpToRotation) {
  for (int q = 2; q <= 12; ++q)
    for (int p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const std::string ours = sturmian_word(p, q).binary();
      for (unsigned mask = 0; mask < (1u << q); ++mask) {
        if (std::popcount(mask) != p) continue;
        std::string w;
        for (int i = 0; i < q; ++i) w.push_back((mask >> i) & 1u ? '1' : '0');
        if (balanced_brute(w)) EXPECT_TRUE(is_rotation_of(w, ours)) << w << " vs " << ours;
        EXPECT_EQ(is_balanced(Word::parse(w)), balanced_brute(w)) << w;
      }
    }
}

TEST(Sturmian, RejectsBadFractions) {
  for (const auto [p, q] : {std::pair{2, 4}, std::pair{0, 3}, std::pair{3, 3}, std::pair{4, 3}}) {
    try {
      sturmian_word(p, q);
      FAIL() << p << "/" << q;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::BadFraction);
    }
  }
}

TEST(Word, ParseAndRender) {
  const Word w = Word::parse("abba");
  EXPECT_EQ(w.binary(), "1001");
  EXPECT_EQ(Word::parse("1001"), w);
  EXPECT_EQ(w.letters_ab(), "abba");
  EXPECT_EQ(w.rotated(1).binary(), "0011");
  EXPECT_EQ(w.least_rotation().binary(), "0011");
  EXPECT_THROW(Word::parse("abc"), Error);
}

TEST(WordMatrix, ProductMatchesIntegerMultiplication) {
  for (int q = 2; q <= 20; ++q)
    for (int p = 1; 2 * p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Word w = sturmian_word(p, q);
      long long m[4] = {1, 0, 0, 1};
      for (const Letter l : w.letters) {
        const long long a[4] = {1, l == Letter::Alpha ? 1 : 0, l == Letter::Beta ? 1 : 0, 1};
        const long long r[4] = {m[0] * a[0] + m[1] * a[2], m[0] * a[1] + m[1] * a[3],
                                m[2] * a[0] + m[3] * a[2], m[2] * a[1] + m[3] * a[3]};
        std::copy(r, r + 4, m);
      }
      const WordMatrix wm(w);
      for (int k = 0; k < 4; ++k) EXPECT_EQ(wm.entries()[k], m[k]);
      EXPECT_EQ(wm.determinant(), 1);
      EXPECT_EQ(wm.trace(), m[0] + m[3]);
    }
  EXPECT_THROW(WordMatrix(Word{}), Error);
}

TEST(WordMatrix, EigenvalueAndAxis) {
  const WordMatrix m(sturmian_word(2, 5));
  const double tr = m.trace().convert_to<double>();
  const auto lambda = m.dominant_eigenvalue();
  ASSERT_TRUE(lambda);
  EXPECT_NEAR(*lambda + 1.0 / *lambda, tr, 1e-12 * tr);
  const auto axis = m.axis_endpoints();
  ASSERT_TRUE(axis);
  const auto& e = m.entries();
  const double a = e[0].convert_to<double>(), b = e[1].convert_to<double>();
  const double c = e[2].convert_to<double>(), d = e[3].convert_to<double>();
  for (const double x : {axis->first, axis->second}) EXPECT_NEAR((a * x + b) / (c * x + d), x, 1e-9);
  // Single letters are parabolic.
  EXPECT_FALSE(WordMatrix(Word::parse("a")).dominant_eigenvalue());
}

TEST(WordMatrix, EigenvalueBoundSweep) {
  for (int q = 2; q <= 50; ++q)
    for (int p = 1; 2 * p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const WordMatrix m(sturmian_word(p, q));
      const BigInt bound = eigenvalue_bound(p, q);
      EXPECT_TRUE(m.eigenvalue_at_most(bound)) << p << "/" << q;
      const double lambda = *m.dominant_eigenvalue();
      EXPECT_LE(lambda, bound.convert_to<double>() * (1 + 1e-12));
    }
  // (ceil(5/2) + 1)^4 = 256.
  EXPECT_EQ(eigenvalue_bound(2, 5), 256);
}

TEST(WordMatrix, ExactEigenvalueComparison) {
  const WordMatrix m(Word::parse("ab"));  // [[2,1],[1,1]], lambda = (3 + sqrt 5)/2
  EXPECT_FALSE(m.eigenvalue_at_most(BigInt(2)));
  EXPECT_TRUE(m.eigenvalue_at_most(BigInt(3)));
}

}  // namespace
}  // namespace corrdyn
