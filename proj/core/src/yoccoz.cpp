#include "corrdyn/yoccoz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/error.hpp"
#include "corrdyn/limit_set.hpp"

namespace corrdyn {

double yoccoz_constant(int p, int q, const DiskVariant& variant) {
  if (p <= 0 || q <= p || std::gcd(p, q) != 1)
    throw Error(Errc::BadFraction, "need coprime 0 < p < q, got " + std::to_string(p) + "/" +
                                       std::to_string(q));
  const double qd = q;
  if (variant.kind == DiskVariant::Kind::Classical) {
    if (variant.degree < 2 || variant.period < 1)
      throw Error(Errc::InvalidArgument, "classical disks need degree >= 2 and period >= 1");
    return variant.period * qd / (2.0 * std::log(static_cast<double>(variant.degree)));
  }
  // theta <= 1/2 uses p, theta > 1/2 the mirrored numerator q - p.
  const int num = (2 * p <= q) ? p : q - p;
  const int ceil_ratio = (q + num - 1) / num;
  return qd * qd / (4.0 * num * std::log(static_cast<double>(ceil_ratio + 1)));
}

Disk yoccoz_disk(int p, int q, const DiskVariant& variant) {
  const double m = yoccoz_constant(p, q, variant);
  const double radius = 1.0 / (2.0 * m);
  return Disk{Cx{radius, 2.0 * std::numbers::pi * p / q}, radius};
}

std::vector<DiskRow> emit_disk_family(int q_max, const std::vector<std::pair<int, int>>& extra,
                                      const DiskVariant& variant) {
  if (q_max < 2) throw Error(Errc::InvalidArgument, "q_max must be >= 2");
  std::vector<std::pair<int, int>> fractions;
  for (int q = 2; q <= q_max; ++q)
    for (int p = 1; 2 * p <= q; ++p)
      if (std::gcd(p, q) == 1) fractions.emplace_back(p, q);
  fractions.insert(fractions.end(), extra.begin(), extra.end());
  std::sort(fractions.begin(), fractions.end(), [](const auto& l, const auto& r) {
    return l.second != r.second ? l.second < r.second : l.first < r.first;
  });
  fractions.erase(std::unique(fractions.begin(), fractions.end()), fractions.end());
  std::vector<DiskRow> rows;
  rows.reserve(fractions.size());
  for (const auto& [p, q] : fractions) rows.push_back({p, q, yoccoz_disk(p, q, variant)});
  return rows;
}

std::string encode_disk_csv(const std::vector<DiskRow>& rows) {
  std::string out = "p,q,center_re,center_im,radius\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", row.p, row.q,
                  row.disk.center.real(), row.disk.center.imag(), row.disk.radius);
    out += buf;
  }
  return out;
}

std::optional<YoccozCheck> yoccoz_check_multiplier(Cx fixed_point, Cx multiplier, int q_max) {
  if (!(std::abs(multiplier) > 1.0)) return std::nullopt;
  YoccozCheck check{fixed_point, multiplier, std::log(multiplier), {}};
  for (int q = 2; q <= q_max; ++q) {
    for (int p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Disk disk = yoccoz_disk(p, q, DiskVariant::mating());
      for (int k = -q_max; k <= q_max; ++k) {
        const Cx tau = check.tau + Cx{0.0, 2.0 * std::numbers::pi * k};
        const double margin = disk.radius - std::abs(tau - disk.center);
        if (margin >= 0.0) check.admissible.push_back({p, q, tau, margin});
      }
    }
  }
  return check;
}

bool YoccozReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

YoccozReport yoccoz_verify(Cx a, int q_max) {
  if (q_max < 2) throw Error(Errc::InvalidArgument, "q_max must be >= 2");
  const FundamentalDomains domains = standard_domains(a);
  YoccozReport report;
  report.a = a;
  for (const FixedPoint& fp : fixed_points(MatingCorr(a, MatingCoords::Original))) {
    if (fp.point == Cx{}) continue;  // P
    if (domains.in_cov_domain(to_covj(a, fp.point))) continue;
    if (fp.multiplier_infinite) {
      report.checks.push_back({fp.point, fp.multiplier, Cx{}, {}});
      continue;
    }
    if (auto check = yoccoz_check_multiplier(fp.point, fp.multiplier, q_max))
      report.checks.push_back(std::move(*check));
  }
  report.no_repelling_fixed_point = report.checks.empty();
  return report;
}

std::string encode_yoccoz_csv(const YoccozReport& report) {
  std::string out = "re_fp,im_fp,re_tau,im_tau,p,q,margin\n";
  char buf[256];
  for (const auto& check : report.checks)
    for (const auto& d : check.admissible) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d,%d,%.17g\n",
                    check.fixed_point.real(), check.fixed_point.imag(), d.tau.real(), d.tau.imag(),
                    d.p, d.q, d.margin);
      out += buf;
    }
  return out;
}

}  // namespace corrdyn
