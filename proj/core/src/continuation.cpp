#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/error.hpp"

namespace corrdyn {

Cycle follow_itinerary(const PowerCorr& corr, Cx seed, std::span<const int> itinerary) {
  Cycle cycle;
  cycle.multiplier = Cx{1.0};
  cycle.points.reserve(itinerary.size());
  Cx z = seed;
  for (const int index : itinerary) {
    cycle.points.push_back(z);
    const BranchSet images = power_forward(corr, z);
    if (index < 0 || static_cast<std::size_t>(index) >= images.images.size())
      throw Error(Errc::InvalidArgument, "itinerary index " + std::to_string(index) +
                                             " out of range for " +
                                             std::to_string(images.images.size()) + " branches");
    const Branch& b = images.images[static_cast<std::size_t>(index)];
    cycle.multiplier *= b.derivative.value_or(Cx{});
    z = b.value;
  }
  return cycle;
}

double cycle_residual(const RationalExp& exp, Cx c, std::span<const Cx> points) {
  double worst = 0.0;
  const std::size_t n = points.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Cx zp = ipow(points[k], exp.p());
    const Cx lhs = ipow(points[(k + 1) % n] - c, exp.q());
    worst = std::max(worst, std::abs(lhs - zp) / std::max(1.0, std::abs(zp)));
  }
  return worst;
}

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// F_k = (z_{k+1} - c)^q - z_k^p, each row scaled by 1/max(1, |z_k|^p).
void assemble(const RationalExp& exp, Cx c, const std::vector<Cx>& z, Vec& f, Mat& jac, Vec& dc) {
  const int p = exp.p();
  const int q = exp.q();
  const auto n = static_cast<Eigen::Index>(z.size());
  f.setZero(n);
  jac.setZero(n, n);
  dc.setZero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Cx zk = z[static_cast<std::size_t>(k)];
    const Eigen::Index next = (k + 1) % n;
    const Cx d = z[static_cast<std::size_t>(next)] - c;
    const Cx zp1 = ipow(zk, p - 1);
    const Cx dq1 = ipow(d, q - 1);
    const double scale = 1.0 / std::max(1.0, std::abs(zp1 * zk));
    f(k) = (dq1 * d - zp1 * zk) * scale;
    jac(k, k) += -static_cast<double>(p) * zp1 * scale;
    jac(k, next) += static_cast<double>(q) * dq1 * scale;
    dc(k) = -static_cast<double>(q) * dq1 * scale;
  }
}

double separation(const std::vector<Cx>& z) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    best = std::min(best, std::abs(z[i]));
    for (std::size_t j = i + 1; j < z.size(); ++j) best = std::min(best, std::abs(z[i] - z[j]));
  }
  return best;
}

constexpr double kCollision = 1e-8;
constexpr double kResidual = 1e-10;

void check_collision(const std::vector<Cx>& z, Cx c) {
  if (separation(z) <= kCollision)
    throw Error(Errc::ContinuationCollision,
                "cycle points merged (or reached the critical point) at c = (" +
                    std::to_string(c.real()) + ", " + std::to_string(c.imag()) + ")");
}

// Predictor tangent, or empty when the Jacobian is numerically singular.
std::optional<Vec> tangent(const RationalExp& exp, Cx c, const std::vector<Cx>& z) {
  Vec f, dc;
  Mat jac;
  assemble(exp, c, z, f, jac, dc);
  Eigen::PartialPivLU<Mat> lu(jac);
  if (!(lu.rcond() > 1e-13)) return std::nullopt;
  return Vec(-lu.solve(dc));
}

// Newton corrector at fixed c. Succeeds only if the residual target is met
// and the solution stayed close to the predicted point.
bool correct(const RationalExp& exp, Cx c, std::vector<Cx>& z, double max_shift) {
  const std::vector<Cx> start = z;
  Vec f, dc;
  Mat jac;
  for (int iter = 0; iter < 40; ++iter) {
    assemble(exp, c, z, f, jac, dc);
    Eigen::PartialPivLU<Mat> lu(jac);
    if (!(lu.rcond() > 1e-15)) return false;
    const Vec step = lu.solve(f);
    double size = 0.0;
    for (Eigen::Index k = 0; k < step.size(); ++k) {
      z[static_cast<std::size_t>(k)] -= step(k);
      size = std::max(size, std::abs(step(k)) /
                                std::max(1.0, std::abs(z[static_cast<std::size_t>(k)])));
    }
    for (const Cx& v : z)
      if (!is_finite(v)) return false;
    if (size <= 1e-15) break;
  }
  if (cycle_residual(exp, c, z) > kResidual) return false;
  for (std::size_t k = 0; k < z.size(); ++k)
    if (std::abs(z[k] - start[k]) > max_shift) return false;
  return true;
}

}  // namespace

std::vector<Cx> cycle_tangent(const RationalExp& exp, Cx c, std::span<const Cx> points) {
  const std::vector<Cx> z(points.begin(), points.end());
  const auto t = tangent(exp, c, z);
  if (!t)
    throw Error(Errc::ContinuationCollision, "cycle system is singular (multiplier 1)");
  return {t->data(), t->data() + t->size()};
}

std::vector<std::vector<Cx>> continue_cycle(const RationalExp& exp, std::span<const Cx> cycle,
                                            std::span<const Cx> path) {
  if (cycle.empty()) throw Error(Errc::InvalidArgument, "empty cycle");
  if (path.empty()) return {};
  std::vector<Cx> z(cycle.begin(), cycle.end());
  if (cycle_residual(exp, path[0], z) > kResidual)
    throw Error(Errc::InvalidArgument, "seed cycle residual exceeds 1e-10 at the first path node");
  check_collision(z, path[0]);

  std::vector<std::vector<Cx>> out;
  out.reserve(path.size());
  out.push_back(z);
  Cx c = path[0];
  for (std::size_t node = 1; node < path.size(); ++node) {
    const Cx target = path[node];
    double fraction = 1.0;  // of the remaining distance to target
    int halvings = 0;
    while (c != target) {
      const Cx next = (fraction >= 1.0) ? target : c + fraction * (target - c);
      std::vector<Cx> trial = z;
      if (const auto t = tangent(exp, c, z)) {
        for (std::size_t k = 0; k < trial.size(); ++k)
          trial[k] += (*t)(static_cast<Eigen::Index>(k)) * (next - c);
      }
      const double max_shift = 0.25 * separation(z);
      if (correct(exp, next, trial, max_shift)) {
        z = std::move(trial);
        c = next;
        check_collision(z, c);
        fraction = std::min(1.0, fraction * 2.0);
        continue;
      }
      if (++halvings > 20)
        throw Error(Errc::NewtonDivergence,
                    "Newton corrector failed after 20 step halvings near c = (" +
                        std::to_string(c.real()) + ", " + std::to_string(c.imag()) + ")");
      fraction *= 0.5;
    }
    out.push_back(z);
  }
  return out;
}

std::vector<Cx> continue_periodic_point(const RationalExp& exp, Cx seed,
                                        std::span<const int> itinerary,
                                        std::span<const Cx> path) {
  if (itinerary.empty()) throw Error(Errc::InvalidArgument, "empty itinerary");
  if (path.empty()) return {};
  const Cycle cycle = follow_itinerary(PowerCorr{exp, path[0]}, seed, itinerary);
  const auto cycles = continue_cycle(exp, cycle.points, path);
  std::vector<Cx> out;
  out.reserve(cycles.size());
  for (const auto& cyc : cycles) out.push_back(cyc.front());
  return out;
}

}  // namespace corrdyn
