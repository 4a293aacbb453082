#include "corrdyn/limit_set.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

#include "corrdyn/error.hpp"

namespace corrdyn {

namespace {

constexpr Cx kP{1.0, 0.0};

bool inside_hyperbola_branch(Cx zeta) {
  const double x = zeta.real();
  const double y = zeta.imag();
  return x > 0.0 && x * x - y * y / 3.0 > 1.0;
}

bool on_or_inside_hyperbola_branch(Cx zeta) {
  const double x = zeta.real();
  const double y = zeta.imag();
  return x > 0.0 && x * x - y * y / 3.0 >= 1.0 - 1e-12 * (1.0 + x * x);
}

// Image of zeta under the branch fixing P, in CovJ coordinates.
Cx fixing_branch(const MatingCorr& corr, Cx zeta) {
  const BranchSet images = mating_forward(corr, zeta);
  Cx best = images.images.front().value;
  for (const auto& b : images.images)
    if (std::abs(b.value - zeta) < std::abs(best - zeta)) best = b.value;
  return best;
}

}  // namespace

bool FundamentalDomains::in_cov_domain(const RiemannPoint& zeta) const {
  if (zeta.is_infinity()) return false;
  const bool right = inside_hyperbola_branch(zeta.value());
  return cov_region_right ? right : !on_or_inside_hyperbola_branch(zeta.value());
}

bool FundamentalDomains::in_j_domain(const RiemannPoint& zeta) const {
  if (zeta.is_infinity()) return j_region_outside;
  const double d = std::abs(zeta.value() - j_circle.center);
  return j_region_outside ? d > j_circle.radius : d < j_circle.radius;
}

bool FundamentalDomains::in_core(const RiemannPoint& zeta) const {
  if (zeta.is_infinity()) return false;
  const Cx z = zeta.value();
  const bool cov_closed = cov_region_right ? on_or_inside_hyperbola_branch(z)
                                           : !inside_hyperbola_branch(z);
  if (!cov_closed) return false;
  const double d = std::abs(z - j_circle.center);
  const double slack = 1e-12 * (1.0 + j_circle.radius);
  return j_region_outside ? d <= j_circle.radius + slack : d >= j_circle.radius - slack;
}

double line_angle_degrees(Cx u, Cx v) {
  const double cosine = std::abs((u * std::conj(v)).real()) / (std::abs(u) * std::abs(v));
  return std::acos(std::clamp(cosine, 0.0, 1.0)) * 180.0 / std::numbers::pi;
}

FundamentalDomains standard_domains(Cx a, double t_max, int samples_per_arc) {
  if (a == Cx{1.0} || !(std::abs(a - 4.0) <= 3.0 + 1e-12))
    throw Error(Errc::OutsideDisk, "standard domains need |a - 4| <= 3 and a != 1");
  if (samples_per_arc < 2 || !(t_max > 2.0))
    throw Error(Errc::InvalidArgument, "need at least 2 samples per arc and t_max > 2");

  FundamentalDomains d;
  d.a = a;
  // w(t) = (-t +- i sqrt(3t^2 - 12))/2 for t in [-t_max, -2], geometric in |t|-1.
  std::vector<double> ts;
  for (int k = 0; k < samples_per_arc; ++k) {
    const double s = static_cast<double>(k) / (samples_per_arc - 1);
    ts.push_back(-(1.0 + std::pow(t_max - 1.0, s)));
  }
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    const double t = *it;
    d.cov_boundary.push_back({-t / 2.0, std::sqrt(std::max(0.0, 3.0 * t * t - 12.0)) / 2.0});
  }
  for (const double t : ts)
    d.cov_boundary.push_back({-t / 2.0, -std::sqrt(std::max(0.0, 3.0 * t * t - 12.0)) / 2.0});

  // Circle through 1 and a tangent to the hyperbola at P; it lies in the
  // closed Cov domain exactly when |a - 4| <= 3. Real a gives diameter [1, a].
  const Cx da = a - 1.0;
  const double radius = std::norm(da) / (2.0 * da.real());
  d.j_circle = Disk{Cx{1.0 + radius, 0.0}, radius};
  d.cov_tangent = Cx{0.0, 1.0};
  d.j_tangent = Cx{0.0, 1.0};

  // g(P + h) = P + h + b h^2 + O(h^3); points approach P along -1/b.
  const MatingCorr corr(a, MatingCoords::CovJ);
  const double h = 1e-3;
  const Cx b = (fixing_branch(corr, kP + h) + fixing_branch(corr, kP - h) - 2.0 * kP) / (2.0 * h * h);
  d.parabolic_axis = std::abs(b) > 0.0 ? std::conj(b) / std::abs(b) : Cx{1.0};
  return d;
}

KleinReport klein_check(const FundamentalDomains& domains, std::size_t samples, std::uint64_t seed) {
  KleinReport report;
  report.samples = samples;
  if (samples == 0) {
    report.vacuous = true;
    return report;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const RiemannPoint p(kP);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    double x = 0, y = 0, z = 0, n = 0;
    do {
      x = normal(rng);
      y = normal(rng);
      z = normal(rng);
      n = std::sqrt(x * x + y * y + z * z);
    } while (n == 0.0);
    x /= n;
    y /= n;
    z /= n;
    const RiemannPoint zeta = (z >= 1.0) ? RiemannPoint::infinity()
                                         : RiemannPoint(Cx{x, y} / (1.0 - z));

    const bool in_cov = domains.in_cov_domain(zeta);
    const bool in_j = domains.in_j_domain(zeta);
    bool bad = !(in_cov || in_j);
    if (!bad) ++covered;
    if (in_j) {
      const RiemannPoint image =
          zeta.is_infinity() ? RiemannPoint((1.0 + domains.a) / 2.0)
                             : involution_j(domains.a, zeta.value());
      if (domains.in_j_domain(image)) bad = true;
    }
    if (in_cov) {
      const Cx w = zeta.value();
      const Cx s = std::sqrt(12.0 - 3.0 * w * w);
      for (const Cx y2 : {(-w + s) / 2.0, (-w - s) / 2.0})
        if (domains.in_cov_domain(RiemannPoint(y2))) bad = true;
    }
    if (bad) {
      ++report.failures;
      report.max_failure_distance = std::max(report.max_failure_distance, chordal_distance(zeta, p));
    }
  }
  report.covered_fraction = static_cast<double>(covered) / static_cast<double>(samples);
  report.passed = report.max_failure_distance <= 1e-3;
  return report;
}

// ------------------------------------------------------------- limit sets

std::string_view to_string(LimitLabel label) {
  switch (label) {
    case LimitLabel::LambdaMinus: return "lambda_minus";
    case LimitLabel::LambdaPlus: return "lambda_plus";
    case LimitLabel::Regular: return "regular";
    case LimitLabel::Unknown: return "unknown";
  }
  return "unknown";
}

Palette<LimitLabel> limit_palette() {
  return {{LimitLabel::LambdaMinus, Rgb{0, 0, 160}},
          {LimitLabel::LambdaPlus, Rgb{200, 0, 0}},
          {LimitLabel::Regular, Rgb{255, 255, 255}},
          {LimitLabel::Unknown, Rgb{128, 128, 128}}};
}

namespace {

RiemannPoint covj_point(const MatingCorr& corr, Cx z) {
  return corr.coords() == MatingCoords::Original ? to_covj(corr.a(), z) : RiemannPoint(z);
}

class ChainSearch {
 public:
  ChainSearch(const MatingCorr& corr, const FundamentalDomains& domains, int depth,
              const LimitSetOptions& options, bool forward)
      : corr_(corr), domains_(domains), depth_(depth), options_(options), forward_(forward),
        p_(corr.parabolic_point()) {}

  ChainResult run(Cx z) {
    if (depth_ < 0) throw Error(Errc::InvalidArgument, "chain depth must be >= 0");
    const bool found = visit(0, z);
    if (found) return ChainResult::Member;
    return exhausted_ ? ChainResult::Exhausted : ChainResult::NotMember;
  }

 private:
  bool allowed(Cx z) const {
    const RiemannPoint zeta = covj_point(corr_, z);
    return forward_ ? !domains_.in_cov_domain(zeta) : domains_.in_core(zeta);
  }

  bool visit(int level, Cx z) {
    if (std::abs(z - p_) <= options_.buffer) return true;
    if (!allowed(z)) return false;
    if (level == depth_) return true;
    if (++nodes_ > options_.node_budget) {
      exhausted_ = true;
      return false;
    }
    BranchSet next;
    try {
      next = forward_ ? mating_forward(corr_, z) : mating_backward(corr_, z);
    } catch (const Error& e) {
      if (e.code() != Errc::PoleInput) throw;
      return false;
    }
    for (const auto& b : next.images) {
      if (!is_finite(b.value)) continue;
      if (visit(level + 1, b.value)) return true;
      if (exhausted_) return false;
    }
    return false;
  }

  const MatingCorr& corr_;
  const FundamentalDomains& domains_;
  int depth_;
  const LimitSetOptions& options_;
  bool forward_;
  Cx p_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

ChainResult in_lambda_plus(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                           int depth, const LimitSetOptions& options) {
  return ChainSearch(corr, domains, depth, options, false).run(z);
}

ChainResult in_lambda_minus(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                            int depth, const LimitSetOptions& options) {
  return ChainSearch(corr, domains, depth, options, true).run(z);
}

LimitLabel limit_label_at(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                          int depth, const LimitSetOptions& options, bool* shared) {
  const ChainResult minus = in_lambda_minus(corr, domains, z, depth, options);
  const ChainResult plus = in_lambda_plus(corr, domains, z, depth, options);
  if (shared) *shared = minus == ChainResult::Member && plus == ChainResult::Member;
  if (minus == ChainResult::Member) return LimitLabel::LambdaMinus;
  if (plus == ChainResult::Member) return LimitLabel::LambdaPlus;
  if (minus == ChainResult::Exhausted || plus == ChainResult::Exhausted) return LimitLabel::Unknown;
  return LimitLabel::Regular;
}

LimitSetRaster render_limit_sets(Cx a, const GridSpec& grid, int depth, MatingCoords coords,
                                 const LimitSetOptions& options, const Executor& executor) {
  grid.validate();
  const FundamentalDomains domains = standard_domains(a);
  const MatingCorr corr(a, coords);
  LimitSetRaster out;
  out.raster = LabeledGrid<LimitLabel>(grid, LimitLabel::Unknown);
  out.coords = coords;
  out.a = a;
  out.buffer = options.buffer;
  std::vector<char> shared(grid.size(), 0);
  executor.parallel_for(static_cast<std::size_t>(grid.pixels_y), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < grid.pixels_x; ++x) {
      bool tie = false;
      out.raster.at(x, y) = limit_label_at(corr, domains, grid.pixel_center(x, y), depth, options, &tie);
      shared[row * static_cast<std::size_t>(grid.pixels_x) + static_cast<std::size_t>(x)] = tie;
    }
  });
  for (std::size_t i = 0; i < shared.size(); ++i)
    if (shared[i]) out.shared.push_back(i);
  return out;
}

SymmetryReport j_symmetry(const LimitSetRaster& render) {
  const auto& raster = render.raster;
  const GridSpec& grid = raster.grid;
  const int w = grid.pixels_x;
  const int h = grid.pixels_y;
  const std::size_t n = grid.size();
  std::vector<char> plus(n, 0);
  std::vector<char> image(n, 0);
  for (const auto i : render.shared) plus[i] = 1;

  SymmetryReport report;
  const Cx p = render.coords == MatingCoords::Original ? Cx{0.0} : Cx{1.0};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                            static_cast<std::size_t>(x);
      const LimitLabel label = raster.labels[i];
      if (label == LimitLabel::LambdaPlus) plus[i] = 1;
      if (label != LimitLabel::LambdaMinus) continue;
      ++report.minus_pixels;
      const Cx z = grid.pixel_center(x, y);
      const RiemannPoint jz = render.coords == MatingCoords::Original
                                  ? RiemannPoint(-z)
                                  : involution_j(render.a, z);
      int jx = 0;
      int jy = 0;
      if (!jz.is_infinity() && grid.locate(jz.value(), jx, jy))
        image[static_cast<std::size_t>(jy) * static_cast<std::size_t>(w) + static_cast<std::size_t>(jx)] = 1;
      const auto touches_plus = [&](int nx, int ny) {
        return nx >= 0 && ny >= 0 && nx < w && ny < h && raster.at(nx, ny) == LimitLabel::LambdaPlus;
      };
      if (touches_plus(x - 1, y) || touches_plus(x + 1, y) || touches_plus(x, y - 1) ||
          touches_plus(x, y + 1))
        report.max_contact_distance = std::max(report.max_contact_distance, std::abs(z - p));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    report.plus_pixels += plus[i];
    report.image_pixels += image[i];
    report.symmetric_difference += (plus[i] != image[i]) ? 1 : 0;
  }
  const std::size_t base = std::min(report.image_pixels, report.plus_pixels);
  report.fraction = base == 0 ? (report.symmetric_difference == 0 ? 0.0 : 1.0)
                              : static_cast<double>(report.symmetric_difference) /
                                    static_cast<double>(base);
  return report;
}

}  // namespace corrdyn
