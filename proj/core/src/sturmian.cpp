#include "corrdyn/sturmian.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "corrdyn/error.hpp"

namespace corrdyn {

namespace {

std::uint64_t parse_count(std::string_view digits) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char ch) {
        return std::isdigit(static_cast<unsigned char>(ch)) != 0;
      }))
    throw Error(Errc::InvalidArgument, "continued fraction entry '" + std::string(digits) +
                                           "' is not a non-negative integer");
  std::uint64_t value = 0;
  for (const char ch : digits) {
    const auto digit = static_cast<std::uint64_t>(ch - '0');
    if (value > (UINT64_MAX - digit) / 10)
      throw Error(Errc::InvalidArgument, "continued fraction entry too large");
    value = value * 10 + digit;
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

ContinuedFraction ContinuedFraction::parse(std::string_view raw) {
  std::string text;
  for (const char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) text.push_back(ch);
  const bool bracketed = !text.empty() && text.front() == '[';
  if (text.empty() || (bracketed && (text.size() < 3 || text.back() != ']')))
    throw Error(Errc::InvalidArgument, "continued fraction must look like [x0; x1, x2, ...]");
  const std::string_view body =
      bracketed ? std::string_view(text).substr(1, text.size() - 2) : std::string_view(text);

  ContinuedFraction cf;
  const auto semi = body.find(';');
  cf.x0 = parse_count(body.substr(0, semi));
  if (semi == std::string_view::npos) return cf;
  std::string_view rest = body.substr(semi + 1);
  if (rest.empty()) return cf;

  if (const auto open = rest.find('('); open != std::string_view::npos) {
    if (rest.back() != ')' || (open > 0 && rest[open - 1] != ','))
      throw Error(Errc::InvalidArgument, "a repeating tail '(...)' must close the fraction");
    for (const auto item : split(rest.substr(open + 1, rest.size() - open - 2), ','))
      cf.periodic_tail.push_back(parse_count(item));
    rest = open > 0 ? rest.substr(0, open - 1) : std::string_view{};
  }
  if (!rest.empty()) {
    auto items = split(rest, ',');
    const bool repeat_last = items.back() == "...";
    if (repeat_last) {
      if (!cf.periodic_tail.empty())
        throw Error(Errc::InvalidArgument, "'...' and '(...)' cannot be combined");
      items.pop_back();
      if (items.empty()) throw Error(Errc::InvalidArgument, "'...' needs a partial to repeat");
    }
    for (const auto item : items) cf.partials.push_back(parse_count(item));
    if (repeat_last) cf.periodic_tail = {cf.partials.back()};
  }
  for (const auto t : cf.periodic_tail)
    if (t == 0) throw Error(Errc::InvalidArgument, "repeating partials must be positive");
  return cf;
}

bool ContinuedFraction::is_canonical() const {
  if (std::any_of(partials.begin(), partials.end(), [](auto v) { return v == 0; })) return false;
  if (std::any_of(periodic_tail.begin(), periodic_tail.end(), [](auto v) { return v == 0; }))
    return false;
  return !is_finite() || partials.empty() || partials.back() >= 2;
}

ContinuedFraction ContinuedFraction::canonical() const {
  // Work on [x0, x1, ...] as one list so merges may reach x0.
  std::vector<std::uint64_t> all{x0};
  all.insert(all.end(), partials.begin(), partials.end());
  std::vector<std::uint64_t> merged{all.front()};
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i] == 0 && i + 1 < all.size()) {
      // [..., a, 0, b, ...] = [..., a + b, ...]
      merged.back() += all[i + 1];
      ++i;
    } else if (all[i] == 0) {
      // [..., a, 0] = [...] (a + 1/0 contributes nothing); never drop x0.
      if (merged.size() > 1) {
        merged.pop_back();
      }
    } else {
      merged.push_back(all[i]);
    }
  }
  ContinuedFraction out;
  out.x0 = merged.front();
  out.partials.assign(merged.begin() + 1, merged.end());
  out.periodic_tail = periodic_tail;
  if (out.is_finite() && !out.partials.empty() && out.partials.back() == 1) {
    out.partials.pop_back();
    if (out.partials.empty())
      out.x0 += 1;
    else
      out.partials.back() += 1;
  }
  return out;
}

ContinuedFraction ContinuedFraction::plus_one() const {
  ContinuedFraction out = *this;
  out.x0 += 1;
  return out;
}

ContinuedFraction ContinuedFraction::over_plus_one() const {
  ContinuedFraction out;
  out.x0 = 0;
  if (x0 >= 1) {
    // x/(x+1) = 1/(1 + 1/x) = [0; 1, x0, x1, ...]
    out.partials = {1, x0};
    out.partials.insert(out.partials.end(), partials.begin(), partials.end());
    out.periodic_tail = periodic_tail;
  } else if (!partials.empty()) {
    // x = [0; x1, ...]: 1 + 1/x = [x1 + 1; x2, ...]
    out.partials = partials;
    out.partials.front() += 1;
    out.periodic_tail = periodic_tail;
  } else if (!periodic_tail.empty()) {
    out.partials = {periodic_tail.front() + 1};
    out.periodic_tail.assign(periodic_tail.begin() + 1, periodic_tail.end());
    out.periodic_tail.push_back(periodic_tail.front());
  }
  return out.canonical();
}

std::string ContinuedFraction::to_string() const {
  std::string out = "[" + std::to_string(x0);
  if (!partials.empty() || !periodic_tail.empty()) out += ";";
  for (std::size_t i = 0; i < partials.size(); ++i)
    out += (i ? "," : "") + std::to_string(partials[i]);
  if (!periodic_tail.empty()) {
    out += partials.empty() ? "(" : ",(";
    for (std::size_t i = 0; i < periodic_tail.size(); ++i)
      out += (i ? "," : "") + std::to_string(periodic_tail[i]);
    out += ")";
  }
  return out + "]";
}

// -------------------------------------------------------------------- dyadic

double Dyadic::to_double() const {
  if (bits <= 60) return std::ldexp(numerator.convert_to<double>(), -static_cast<int>(bits));
  const BigInt top = numerator >> (bits - 60);
  return std::ldexp(top.convert_to<double>(), -60);
}

std::string Dyadic::to_binary() const {
  const BigInt one = BigInt(1) << bits;
  if (numerator >= one) return "1";
  std::string out = "0.";
  for (unsigned i = 1; i <= bits; ++i) out.push_back(bit_test(numerator, bits - i) ? '1' : '0');
  return out;
}

std::string Dyadic::to_fraction() const {
  if (numerator == 0) return "0";
  BigInt num = numerator;
  unsigned k = bits;
  while (k > 0 && !bit_test(num, 0)) {
    num >>= 1;
    --k;
  }
  if (k == 0) return num.str();
  return num.str() + "/2^" + std::to_string(k);
}

Dyadic minkowski_h(const ContinuedFraction& cf, unsigned precision_bits) {
  if (precision_bits > 4096)
    throw Error(Errc::PrecisionOverflow, "precision " + std::to_string(precision_bits) +
                                             " bits exceeds the 4096-bit limit");
  if (precision_bits == 0) throw Error(Errc::InvalidArgument, "precision must be positive");
  if (!cf.is_canonical())
    throw Error(Errc::InvalidArgument, "continued fraction " + cf.to_string() + " is not canonical");

  const std::uint64_t P = precision_bits;
  BigInt num = 0;
  std::uint64_t pos = 0;  // digits emitted so far (saturates past P)
  bool ones = true;
  const auto emit = [&](std::uint64_t len) {
    if (ones && pos < P && len > 0) {
      const std::uint64_t end = std::min<std::uint64_t>(P, pos + std::min<std::uint64_t>(len, P));
      num += (BigInt(1) << static_cast<unsigned>(P - pos)) - (BigInt(1) << static_cast<unsigned>(P - end));
    }
    pos = std::min<std::uint64_t>(P + 1, pos + std::min<std::uint64_t>(len, P + 1));
    ones = !ones;
  };

  emit(cf.x0);
  for (const auto a : cf.partials) emit(a);
  if (!cf.is_finite()) {
    while (pos < P)
      for (const auto a : cf.periodic_tail) emit(a);
  } else if (ones && pos <= P) {
    // The last run was zeros: ones forever sum to exactly 2^-pos.
    num += BigInt(1) << static_cast<unsigned>(P - pos);
  }
  return Dyadic{num, precision_bits};
}

ConjugacyReport h_conjugacy_check(const ContinuedFraction& cf, unsigned precision_bits) {
  const Dyadic hx = minkowski_h(cf, precision_bits);
  const Dyadic ha = minkowski_h(cf.plus_one(), precision_bits);
  const Dyadic hb = minkowski_h(cf.over_plus_one(), precision_bits);
  // Everything in units of 2^-(P+1); the tolerance 2^(1-P) is 4 units.
  const BigInt one = BigInt(1) << precision_bits;
  BigInt da = 2 * ha.numerator - (hx.numerator + one);
  BigInt db = 2 * hb.numerator - hx.numerator;
  if (da < 0) da = -da;
  if (db < 0) db = -db;
  ConjugacyReport report;
  report.alpha_ok = da <= 4;
  report.beta_ok = db <= 4;
  report.alpha_error = Dyadic{da, precision_bits + 1}.to_double();
  report.beta_error = Dyadic{db, precision_bits + 1}.to_double();
  return report;
}

// --------------------------------------------------------------------- words

std::size_t Word::count(Letter l) const {
  return static_cast<std::size_t>(std::count(letters.begin(), letters.end(), l));
}

std::string Word::binary() const {
  std::string out;
  for (const Letter l : letters) out.push_back(l == Letter::Alpha ? '1' : '0');
  return out;
}

std::string Word::letters_ab() const {
  std::string out;
  for (const Letter l : letters) out.push_back(l == Letter::Alpha ? 'a' : 'b');
  return out;
}

Word Word::rotated(std::size_t k) const {
  Word out = *this;
  if (!letters.empty())
    std::rotate(out.letters.begin(),
                out.letters.begin() + static_cast<std::ptrdiff_t>(k % letters.size()),
                out.letters.end());
  return out;
}

Word Word::least_rotation() const {
  // Beta sorts before alpha, i.e. the order of the binary digits 0 < 1.
  Word best = *this;
  std::string best_key = binary();
  for (std::size_t k = 1; k < letters.size(); ++k) {
    Word candidate = rotated(k);
    std::string key = candidate.binary();
    if (key < best_key) {
      best = std::move(candidate);
      best_key = std::move(key);
    }
  }
  return best;
}

Word Word::parse(std::string_view text) {
  Word w;
  for (const char ch : text) {
    if (ch == '1' || ch == 'a')
      w.letters.push_back(Letter::Alpha);
    else if (ch == '0' || ch == 'b')
      w.letters.push_back(Letter::Beta);
    else
      throw Error(Errc::InvalidArgument, "word letters must be 0/1 or a/b");
  }
  return w;
}

Word sturmian_word(int p, int q) {
  if (p <= 0 || q <= p || std::gcd(p, q) != 1)
    throw Error(Errc::BadFraction, "need coprime 0 < p < q, got " + std::to_string(p) + "/" +
                                       std::to_string(q));
  Word w;
  w.letters.reserve(static_cast<std::size_t>(q));
  const auto P = static_cast<std::int64_t>(p);
  const auto Q = static_cast<std::int64_t>(q);
  for (std::int64_t i = 0; i < Q; ++i) {
    const std::int64_t s = ((i + 1) * P) / Q - (i * P) / Q;
    w.letters.push_back(s == 1 ? Letter::Alpha : Letter::Beta);
  }
  return w.least_rotation();
}

bool is_balanced(const Word& word) {
  const std::size_t n = word.size();
  for (std::size_t len = 1; len < n; ++len) {
    std::size_t ones = 0;
    for (std::size_t i = 0; i < len; ++i) ones += word.letters[i] == Letter::Alpha;
    std::size_t lo = ones;
    std::size_t hi = ones;
    for (std::size_t start = 1; start < n; ++start) {
      ones -= word.letters[start - 1] == Letter::Alpha;
      ones += word.letters[(start + len - 1) % n] == Letter::Alpha;
      lo = std::min(lo, ones);
      hi = std::max(hi, ones);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

WordMatrix::WordMatrix(Word word) : word_(std::move(word)), m_{1, 0, 0, 1} {
  if (word_.letters.empty()) throw Error(Errc::InvalidArgument, "word matrix needs a nonempty word");
  for (const Letter l : word_.letters) {
    if (l == Letter::Alpha) {
      m_[1] += m_[0];
      m_[3] += m_[2];
    } else {
      m_[0] += m_[1];
      m_[2] += m_[3];
    }
  }
}

std::optional<double> WordMatrix::dominant_eigenvalue() const {
  const BigInt tr = trace();
  const BigInt mag = tr < 0 ? BigInt(-tr) : tr;
  if (mag <= 2) return std::nullopt;
  const double t = mag.convert_to<double>();
  const double lambda = 0.5 * (t + std::sqrt((t - 2.0) * (t + 2.0)));
  return tr < 0 ? -lambda : lambda;
}

bool WordMatrix::eigenvalue_at_most(const BigInt& bound) const {
  if (bound < 1) return false;
  const BigInt tr = trace();
  const BigInt mag = tr < 0 ? BigInt(-tr) : tr;
  if (mag <= 2) return true;
  return mag * bound <= bound * bound + 1;
}

std::optional<std::pair<double, double>> WordMatrix::axis_endpoints() const {
  const BigInt tr = trace();
  const BigInt disc = tr * tr - 4;
  if (disc <= 0) return std::nullopt;
  const double a = m_[0].convert_to<double>();
  const double b = m_[1].convert_to<double>();
  const double c = m_[2].convert_to<double>();
  const double d = m_[3].convert_to<double>();
  const double root = std::sqrt(disc.convert_to<double>());
  if (m_[2] == 0) return std::pair{b / (d - a), std::numeric_limits<double>::infinity()};
  double x1 = ((a - d) - root) / (2.0 * c);
  double x2 = ((a - d) + root) / (2.0 * c);
  if (x1 > x2) std::swap(x1, x2);
  return std::pair{x1, x2};
}

BigInt eigenvalue_bound(int p, int q) {
  if (p <= 0 || q <= 0) throw Error(Errc::BadFraction, "need positive p and q");
  const int ceil_ratio = (q + p - 1) / p;
  BigInt out = 1;
  for (int i = 0; i < 2 * p; ++i) out *= (ceil_ratio + 1);
  return out;
}

}  // namespace corrdyn
