#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrdyn/types.hpp"

namespace corrdyn {

/// Which inequality defines the disks. Mating: the bound for the repelling
/// fixed points of the mating family. Classical: degree-d polynomial with a
/// cycle of period m.
struct DiskVariant {
  enum class Kind { Mating, Classical } kind = Kind::Mating;
  int degree = 2;
  int period = 1;

  static DiskVariant mating() { return {}; }
  static DiskVariant classical(int degree, int period) {
    return {Kind::Classical, degree, period};
  }
};

/// The constant M in Re tau >= M |tau - 2 pi i p/q|^2. Throws
/// Error{BadFraction} unless 0 < p < q, gcd(p, q) = 1, and
/// Error{InvalidArgument} for a classical degree < 2 or period < 1.
double yoccoz_constant(int p, int q, const DiskVariant& variant);

/// The closed disk of the inequality: center 2 pi i p/q + 1/(2M), radius
/// 1/(2M), tangent to the imaginary axis at 2 pi i p/q.
Disk yoccoz_disk(int p, int q, const DiskVariant& variant);

struct DiskRow {
  int p;
  int q;
  Disk disk;
};

/// All coprime p/q in (0, 1/2] with q <= q_max plus the extras, sorted by q
/// then p, duplicates removed. Throws Error{InvalidArgument} for q_max < 2.
std::vector<DiskRow> emit_disk_family(int q_max, const std::vector<std::pair<int, int>>& extra,
                                      const DiskVariant& variant);

/// CSV "p,q,center_re,center_im,radius", 17 significant digits, LF endings.
std::string encode_disk_csv(const std::vector<DiskRow>& rows);

// ---------------------------------------------------------------- verification

struct AdmissibleDisk {
  int p;
  int q;
  /// The branch of log(multiplier) inside the disk.
  Cx tau;
  /// radius - |tau - center|, >= 0 inside.
  double margin;
};

struct YoccozCheck {
  Cx fixed_point;
  Cx multiplier;
  /// Principal branch of log(multiplier).
  Cx tau;
  std::vector<AdmissibleDisk> admissible;
  bool passed() const { return !admissible.empty(); }
};

/// Scans tau = Log(lambda) + 2 pi i k, |k| <= q_max, against the mating disks
/// of every coprime p/q in (0, 1) with q <= q_max. Returns empty for a
/// non-repelling multiplier (Re log lambda <= 0).
std::optional<YoccozCheck> yoccoz_check_multiplier(Cx fixed_point, Cx multiplier, int q_max);

struct YoccozReport {
  Cx a;
  std::vector<YoccozCheck> checks;
  /// No repelling fixed point of the quadratic-like side exists for this a;
  /// the inequality then has nothing to constrain.
  bool no_repelling_fixed_point = false;
  bool passed() const;
};

/// Checks the inequality at the repelling fixed points of the mating F_a
/// that lie on the limit-set side of the quadratic-like restriction: fixed
/// points z != P (Original coordinates) whose image phi_a(z) is not in the
/// Cov fundamental domain. Throws Error{OutsideDisk} for |a - 4| > 3.
YoccozReport yoccoz_verify(Cx a, int q_max);

/// CSV "re_fp,im_fp,re_tau,im_tau,p,q,margin", one row per admissible disk.
std::string encode_yoccoz_csv(const YoccozReport& report);

}  // namespace corrdyn
