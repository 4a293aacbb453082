#include "corrdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "corrdyn/error.hpp"

namespace corrdyn {

Cx poly_eval(std::span<const Cx> coeffs, Cx z) {
  Cx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double poly_scaled_residual(std::span<const Cx> coeffs, Cx z) {
  double scale = 0.0;
  const double r = std::abs(z);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) scale = scale * r + std::abs(*it);
  if (scale == 0.0) return 0.0;
  return std::abs(poly_eval(coeffs, z)) / scale;
}

Poly poly_mul(std::span<const Cx> lhs, std::span<const Cx> rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  Poly out(lhs.size() + rhs.size() - 1, Cx{});
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
  return out;
}

Poly poly_add(std::span<const Cx> lhs, std::span<const Cx> rhs) {
  Poly out(std::max(lhs.size(), rhs.size()), Cx{});
  for (std::size_t i = 0; i < lhs.size(); ++i) out[i] += lhs[i];
  for (std::size_t i = 0; i < rhs.size(); ++i) out[i] += rhs[i];
  return out;
}

Poly poly_scale(std::span<const Cx> coeffs, Cx factor) {
  Poly out(coeffs.begin(), coeffs.end());
  for (auto& c : out) c *= factor;
  return out;
}

Poly binomial_power(Cx shift, int n) {
  Poly out{Cx{1.0}};
  const Poly linear{shift, Cx{1.0}};
  for (int i = 0; i < n; ++i) out = poly_mul(out, linear);
  return out;
}

namespace {

// Newton step ratio P/P' and the Aberth correction for root k.
bool aberth_pass(std::span<const Cx> coeffs, std::span<const Cx> deriv, std::vector<Cx>& z) {
  bool moved = false;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const Cx p = poly_eval(coeffs, z[k]);
    if (p == Cx{}) continue;
    const Cx dp = poly_eval(deriv, z[k]);
    Cx sum{};
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == k) continue;
      const Cx diff = z[k] - z[j];
      if (diff != Cx{}) sum += 1.0 / diff;
    }
    const Cx ratio = (dp == Cx{}) ? Cx{1e-3} : p / dp;
    const Cx denom = 1.0 - ratio * sum;
    const Cx step = (denom == Cx{}) ? ratio : ratio / denom;
    if (!is_finite(step)) continue;
    z[k] -= step;
    if (std::abs(step) > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z[k])))
      moved = true;
  }
  return moved;
}

}  // namespace

std::vector<Cx> poly_roots(std::span<const Cx> coeffs_in, double tolerance) {
  Poly coeffs(coeffs_in.begin(), coeffs_in.end());
  while (!coeffs.empty() && coeffs.back() == Cx{}) coeffs.pop_back();
  if (coeffs.size() <= 1) return {};

  std::vector<Cx> roots;
  std::size_t lead_zeros = 0;
  while (lead_zeros < coeffs.size() && coeffs[lead_zeros] == Cx{}) ++lead_zeros;
  roots.assign(lead_zeros, Cx{});
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<std::ptrdiff_t>(lead_zeros));

  const std::size_t degree = coeffs.size() - 1;
  if (degree == 0) return roots;
  const Cx lead = coeffs.back();
  for (auto& c : coeffs) c /= lead;

  Poly deriv(degree);
  for (std::size_t i = 1; i <= degree; ++i) deriv[i - 1] = coeffs[i] * static_cast<double>(i);

  // Fujiwara-style bound for the root moduli.
  double bound = 0.0;
  for (std::size_t i = 0; i < degree; ++i)
    bound = std::max(bound, std::pow(std::abs(coeffs[i]), 1.0 / static_cast<double>(degree - i)));
  bound = std::max(2.0 * bound, 1e-3);

  std::mt19937_64 rng(0x5eed'c0ffeeULL);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::vector<Cx> z(degree);

  for (int attempt = 0; attempt < 8; ++attempt) {
    const double radius = bound * (attempt == 0 ? 0.5 : 0.5 + jitter(rng) + 0.1);
    const double phase = 0.4 + (attempt == 0 ? 0.0 : jitter(rng));
    for (std::size_t k = 0; k < degree; ++k) {
      const double ang = kTwoPi * static_cast<double>(k) / static_cast<double>(degree) + phase;
      z[k] = std::polar(radius, ang);
    }
    for (int iter = 0; iter < 2000; ++iter) {
      if (!aberth_pass(coeffs, deriv, z)) break;
    }
    bool ok = true;
    for (const auto& r : z) {
      if (!is_finite(r) || poly_scaled_residual(coeffs, r) > tolerance) {
        ok = false;
        break;
      }
    }
    if (ok) {
      roots.insert(roots.end(), z.begin(), z.end());
      return roots;
    }
  }
  throw Error(Errc::RootFindingFailure,
              "Aberth iteration did not reach residual " + std::to_string(tolerance) +
                  " for degree " + std::to_string(degree));
}

}  // namespace corrdyn
