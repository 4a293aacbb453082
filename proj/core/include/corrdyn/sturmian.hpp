#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace corrdyn {

using BigInt = boost::multiprecision::cpp_int;

// ------------------------------------------------------- continued fractions

/// [x0; x1, x2, ...] with an optional repeating tail.
struct ContinuedFraction {
  std::uint64_t x0 = 0;
  std::vector<std::uint64_t> partials;
  std::vector<std::uint64_t> periodic_tail;

  /// Parses "[x0; x1, x2]", "[x0]", "[x0; x1, (y1, y2)]" (parenthesised
  /// repeating tail) and "[x0; x1, x2, ...]" (last partial repeats).
  /// The brackets are optional and whitespace is ignored.
  /// Throws Error{InvalidArgument}.
  static ContinuedFraction parse(std::string_view text);

  bool is_finite() const { return periodic_tail.empty(); }
  /// Finite CFs: last partial >= 2 unless there are no partials. Partials
  /// and tail entries must be positive.
  bool is_canonical() const;
  /// Rewrites a trailing partial 1 into the previous one ([..., a, 1] = [..., a+1]).
  ContinuedFraction canonical() const;

  /// x + 1.
  ContinuedFraction plus_one() const;
  /// x / (x + 1).
  ContinuedFraction over_plus_one() const;

  std::string to_string() const;
  bool operator==(const ContinuedFraction&) const = default;
};

/// numerator / 2^bits.
struct Dyadic {
  BigInt numerator;
  unsigned bits = 0;

  double to_double() const;
  /// Exact binary expansion "0.b1b2..." with `bits` digits (or "1" for 1).
  std::string to_binary() const;
  std::string to_fraction() const;
};

/// Minkowski's conjugacy h: the binary expansion with x0 ones, x1 zeros,
/// x2 ones, ...; after the last partial of a finite CF the opposite digit
/// repeats forever. Returns floor(h * 2^bits) / 2^bits, which is exact for a
/// finite CF whose runs fit in `bits`. Throws Error{PrecisionOverflow} for
/// bits > 4096 and Error{InvalidArgument} for a non-canonical CF.
Dyadic minkowski_h(const ContinuedFraction& cf, unsigned precision_bits);

struct ConjugacyReport {
  /// |h(x+1) - (h(x)+1)/2| and |h(x/(x+1)) - h(x)/2|.
  double alpha_error = 0.0;
  double beta_error = 0.0;
  /// Errors compared exactly against 2^(1 - bits).
  bool alpha_ok = false;
  bool beta_ok = false;
  bool passed() const { return alpha_ok && beta_ok; }
};

/// Checks h(x+1) = (h(x)+1)/2 and h(x/(x+1)) = h(x)/2 to 2^(1-bits) using
/// exact CF transforms and exact dyadic arithmetic.
ConjugacyReport h_conjugacy_check(const ContinuedFraction& cf, unsigned precision_bits);

// --------------------------------------------------------------------- words

enum class Letter : std::uint8_t { Alpha, Beta };

struct Word {
  std::vector<Letter> letters;

  std::size_t size() const { return letters.size(); }
  std::size_t count(Letter l) const;
  /// "1" for alpha, "0" for beta.
  std::string binary() const;
  /// "a" for alpha, "b" for beta.
  std::string letters_ab() const;
  Word rotated(std::size_t k) const;
  /// Lexicographically least rotation with beta < alpha.
  Word least_rotation() const;
  bool operator==(const Word&) const = default;

  /// Parses a string over {0,1} or {a,b}. Throws Error{InvalidArgument}.
  static Word parse(std::string_view text);
};

/// Mechanical word s_i = floor((i+1)p/q) - floor(ip/q), 1 -> alpha, 0 -> beta,
/// returned as its least rotation. Throws Error{BadFraction} unless
/// 0 < p < q and gcd(p, q) = 1.
Word sturmian_word(int p, int q);

/// Any two factors of equal length (taken cyclically) differ by at most one
/// in their alpha count.
bool is_balanced(const Word& word);

/// The word read as a product of M_alpha = [[1,1],[0,1]] and
/// M_beta = [[1,0],[1,1]] in letter order.
class WordMatrix {
 public:
  /// Throws Error{InvalidArgument} for an empty word.
  explicit WordMatrix(Word word);

  const Word& word() const { return word_; }
  /// Row-major a, b, c, d.
  const std::array<BigInt, 4>& entries() const { return m_; }
  BigInt trace() const { return m_[0] + m_[3]; }
  BigInt determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  /// (tr + sqrt(tr^2 - 4)) / 2, or empty when |tr| <= 2.
  std::optional<double> dominant_eigenvalue() const;
  /// Exact test of dominant eigenvalue <= bound (bound >= 1): since
  /// lambda + 1/lambda = tr, this is tr * bound <= bound^2 + 1.
  bool eigenvalue_at_most(const BigInt& bound) const;
  /// Real fixed points of x -> (ax+b)/(cx+d): roots of c x^2 + (d-a) x - b.
  /// Empty unless the matrix is hyperbolic (two distinct real roots); a
  /// root at infinity is reported as +inf.
  std::optional<std::pair<double, double>> axis_endpoints() const;

 private:
  Word word_;
  std::array<BigInt, 4> m_;
};

/// (ceil(q/p) + 1)^(2p).
BigInt eigenvalue_bound(int p, int q);

}  // namespace corrdyn
