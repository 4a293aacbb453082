#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/executor.hpp"
#include "corrdyn/raster.hpp"

namespace corrdyn {

/// Fundamental domains of Cov and J in CovJ coordinates (P = 1).
///
/// Delta_Cov is bounded by the image of (-inf, -2] under Cov, the right
/// branch of the hyperbola x^2 - y^2/3 = 1; with the default orientation it
/// is the open region to the right of that branch. Delta_J is one side of
/// j_circle, a circle through 1 and a (J swaps its two sides); by default the
/// exterior. The standard circle is tangent to the hyperbola at P.
struct FundamentalDomains {
  Cx a;
  /// Boundary samples: the upper arc from the far end down to P, then the
  /// lower arc from P outward.
  std::vector<Cx> cov_boundary;
  Disk j_circle;
  bool cov_region_right = true;
  bool j_region_outside = true;
  /// Unit tangent directions of the two boundaries at P.
  Cx cov_tangent;
  Cx j_tangent;
  /// Unit direction of the attracting-repelling axis of the branch fixing P,
  /// estimated from the second-order term of that branch.
  Cx parabolic_axis;

  bool in_cov_domain(const RiemannPoint& zeta) const;
  bool in_j_domain(const RiemannPoint& zeta) const;
  /// Closure of Delta_Cov intersected with the closed complement of Delta_J
  /// (= closure of Delta_Cov n J(Delta_J)): the forward-invariant region.
  bool in_core(const RiemannPoint& zeta) const;
};

/// Throws Error{OutsideDisk} unless |a - 4| <= 3 and a != 1.
FundamentalDomains standard_domains(Cx a, double t_max = 1e4, int samples_per_arc = 256);

/// Angle in degrees, in [0, 90], between the lines spanned by u and v.
double line_angle_degrees(Cx u, Cx v);

struct KleinReport {
  std::size_t samples = 0;
  /// Fraction of samples in Delta_Cov u Delta_J.
  double covered_fraction = 1.0;
  /// Samples that are uncovered, or that lie in a domain together with one
  /// of their images under the corresponding involution/correspondence.
  std::size_t failures = 0;
  /// Largest chordal distance from P among the failures (0 if none).
  double max_failure_distance = 0.0;
  bool passed = true;
  bool vacuous = false;
};

/// Samples the sphere uniformly (seeded) and checks that the domains cover
/// everything but P and are fundamental: J(Delta_J) and Delta_J are
/// disjoint, and no Cov image of a point of Delta_Cov is in Delta_Cov.
/// Passes iff every failing sample is within chordal distance 1e-3 of P.
KleinReport klein_check(const FundamentalDomains& domains, std::size_t samples,
                        std::uint64_t seed = 7);

// ------------------------------------------------------------- limit sets

enum class LimitLabel : std::uint8_t { LambdaMinus, LambdaPlus, Regular, Unknown };
std::string_view to_string(LimitLabel label);
Palette<LimitLabel> limit_palette();

struct LimitSetOptions {
  /// Chains entering this disk around P (render coordinates) are accepted.
  double buffer = 1e-3;
  std::size_t node_budget = 1'000'000;
};

enum class ChainResult { Member, NotMember, Exhausted };

/// Exists a backward chain z = z_0, z_1 in F^-1(z_0), ..., z_depth with every
/// point in the closed core region, or reaching the near-P buffer.
ChainResult in_lambda_plus(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                           int depth, const LimitSetOptions& options = {});

/// Exists a forward chain of length depth that never enters Delta_Cov, or
/// reaches the near-P buffer.
ChainResult in_lambda_minus(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                            int depth, const LimitSetOptions& options = {});

/// Label of a single point; LambdaMinus wins ties. `shared` reports a tie.
LimitLabel limit_label_at(const MatingCorr& corr, const FundamentalDomains& domains, Cx z,
                          int depth, const LimitSetOptions& options, bool* shared = nullptr);

struct LimitSetRaster {
  LabeledGrid<LimitLabel> raster;
  MatingCoords coords = MatingCoords::Original;
  Cx a;
  double buffer = 1e-3;
  /// Pixel indices that satisfied both tests (labeled LambdaMinus).
  std::vector<std::size_t> shared;
};

LimitSetRaster render_limit_sets(Cx a, const GridSpec& grid, int depth, MatingCoords coords,
                                 const LimitSetOptions& options = {},
                                 const Executor& executor = sequential_executor());

struct SymmetryReport {
  std::size_t minus_pixels = 0;
  std::size_t plus_pixels = 0;
  /// Distinct pixels hit by J of LambdaMinus pixel centers.
  std::size_t image_pixels = 0;
  std::size_t symmetric_difference = 0;
  /// symmetric_difference / min(image_pixels, plus_pixels).
  double fraction = 0.0;
  /// Largest distance from P (render coordinates) of a LambdaMinus pixel
  /// 4-adjacent to a LambdaPlus pixel.
  double max_contact_distance = 0.0;
};

/// Compares J(LambdaMinus) with LambdaPlus pixelwise; shared pixels count as
/// both.
SymmetryReport j_symmetry(const LimitSetRaster& render);

}  // namespace corrdyn
