#include "corrdyn/cifs.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "corrdyn/error.hpp"

namespace corrdyn {

namespace {

std::string radius_text(double rho) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", rho);
  return buf;
}

}  // namespace

CifsData cifs_for_radius(const RationalExp& exp, Cx c, double rho) {
  const double beta = exp.beta();
  const double mag = std::abs(c);
  const double image_radius = std::pow(rho, beta);
  if (!(rho > 0.0) || !(image_radius < mag) || !(mag + image_radius < rho - 1e-12))
    throw Error(Errc::NoValidRadius, "radius " + radius_text(rho) +
                                         " does not give a disk image avoiding 0 inside the disk");
  const double contraction = beta * std::pow(mag + image_radius, beta - 1.0);
  if (!(contraction < 1.0))
    throw Error(Errc::NoValidRadius, "radius " + radius_text(rho) + " gives contraction bound " +
                                         radius_text(contraction) + " >= 1");
  return CifsData{exp, c, Disk{Cx{}, rho}, Disk{c, image_radius}, exp.q(), contraction};
}

CifsData build_cifs(const RationalExp& exp, Cx c) {
  if (c == Cx{}) throw Error(Errc::InvalidArgument, "the CIFS construction needs c != 0");
  const double beta = exp.beta();
  const double mag = std::abs(c);
  const double lo = 0.5 * std::pow(mag, 1.0 / beta);
  const double hi = 1.0;
  std::optional<CifsData> best;
  double best_margin = -std::numeric_limits<double>::infinity();
  if (lo < hi) {
    constexpr int kSteps = 64;
    for (int k = 0; k < kSteps; ++k) {
      const double rho = lo * std::pow(hi / lo, static_cast<double>(k) / (kSteps - 1));
      try {
        CifsData candidate = cifs_for_radius(exp, c, rho);
        const double margin = rho - mag - candidate.image.radius;
        if (margin > best_margin) {
          best_margin = margin;
          best = candidate;
        }
      } catch (const Error&) {
      }
    }
  }
  if (!best)
    throw Error(Errc::NoValidRadius, "no radius on the search grid gives a valid CIFS for |c| = " +
                                         radius_text(mag));
  return *best;
}

Cx cifs_branch(const CifsData& cifs, int j, Cx z) {
  const Cx log_z = std::log(cifs.c) + std::log(z / cifs.c);
  return cifs.c + std::exp(cifs.exp.beta() * log_z + Cx{0.0, kTwoPi * j / cifs.branch_count});
}

double cifs_branch_derivative_modulus(const CifsData& cifs, int j, Cx z) {
  const Cx w = cifs_branch(cifs, j, z);
  return cifs.exp.beta() * std::abs(w - cifs.c) / std::abs(z);
}

namespace {

struct QuantKey {
  std::int64_t re;
  std::int64_t im;
  bool operator==(const QuantKey&) const = default;
};
struct QuantHash {
  std::size_t operator()(const QuantKey& k) const noexcept {
    return std::hash<std::int64_t>{}(k.re) * 0x9e3779b97f4a7c15ULL ^ std::hash<std::int64_t>{}(k.im);
  }
};

}  // namespace

AttractorSample hutchinson_iterate(const CifsData& cifs, Cx seed, int generations,
                                   const Executor& executor) {
  if (generations < 0) throw Error(Errc::InvalidArgument, "generations must be >= 0");
  const double limit = cifs.image.radius * (1.0 + 1e-12);
  if (!(std::abs(seed - cifs.c) <= limit))
    throw Error(Errc::InvalidArgument, "Hutchinson seed must lie in the image disk");
  const auto q = static_cast<std::size_t>(cifs.branch_count);
  AttractorSample sample{{seed}, 0};
  for (int g = 0; g < generations; ++g) {
    const std::size_t n = sample.points.size();
    if (n * q > (std::size_t{1} << 22))
      throw Error(Errc::InvalidArgument, "Hutchinson sample would exceed 2^22 points");
    std::vector<Cx> next(n * q);
    std::vector<char> escaped(n, 0);
    executor.parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < q; ++j) {
        const Cx w = cifs_branch(cifs, static_cast<int>(j), sample.points[i]);
        if (!(std::abs(w - cifs.c) <= limit)) escaped[i] = 1;
        next[i * q + j] = w;
      }
    });
    for (const char e : escaped)
      if (e) throw Error(Errc::EscapedD1, "a branch image left the image disk");
    std::unordered_set<QuantKey, QuantHash> seen;
    std::vector<Cx> merged;
    merged.reserve(next.size());
    for (const Cx w : next)
      if (seen.insert({std::llround(w.real() * 1e12), std::llround(w.imag() * 1e12)}).second)
        merged.push_back(w);
    sample.points = std::move(merged);
    sample.generation = g + 1;
  }
  return sample;
}

int generations_for_tolerance(const CifsData& cifs, double tolerance) {
  if (!(tolerance > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  int generations = 0;
  double spread = 2.0 * cifs.image.radius;
  while (spread >= tolerance) {
    spread *= cifs.contraction;
    ++generations;
  }
  return generations;
}

AttractorSample dual_julia_points(const RationalExp& exp, Cx c, double tolerance,
                                  const Executor& executor) {
  if (!(tolerance > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (c == Cx{}) return AttractorSample{{Cx{}}, 0};
  const CifsData cifs = build_cifs(exp, c);
  return hutchinson_iterate(cifs, c, generations_for_tolerance(cifs, tolerance), executor);
}

double moran_bound(int branch_count, double contraction) {
  return std::log(static_cast<double>(branch_count)) / std::log(1.0 / contraction);
}

double hausdorff_upper_bound(const CifsData& cifs) {
  return moran_bound(cifs.branch_count, cifs.contraction);
}

std::string encode_attractor_csv(const AttractorSample& sample) {
  std::string out = "gen,re,im\n";
  char buf[96];
  for (const Cx z : sample.points) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", sample.generation, z.real(), z.imag());
    out += buf;
  }
  return out;
}

std::string encode_dimension_csv(const CifsData& cifs) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "beta_p,beta_q,c_re,c_im,rho,r,s_star\n%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                cifs.exp.p(), cifs.exp.q(), cifs.c.real(), cifs.c.imag(), cifs.outer.radius,
                cifs.contraction, hausdorff_upper_bound(cifs));
  return buf;
}

}  // namespace corrdyn
