#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/executor.hpp"

namespace corrdyn {

/// Contracting system of the q forward branches of z^beta + c near c = 0:
/// D = disk(0, rho) is mapped by every branch into D1 = disk(c, rho^beta),
/// which avoids 0 and sits compactly inside D.
struct CifsData {
  RationalExp exp;
  Cx c;
  Disk outer;
  Disk image;
  int branch_count;
  /// beta * (|c| + rho^beta)^(beta - 1): a bound for |f_j'| on D1.
  double contraction;
};

/// CIFS for a given outer radius. Throws Error{NoValidRadius} unless
/// rho^beta < |c|, |c| + rho^beta < rho - 1e-12 and the contraction is < 1.
CifsData cifs_for_radius(const RationalExp& exp, Cx c, double rho);

/// Scans 64 geometric radii from 0.5 |c|^(1/beta) to 1 and keeps the feasible
/// one with the largest containment margin rho - |c| - rho^beta.
/// Throws Error{InvalidArgument} for c = 0 and Error{NoValidRadius}.
CifsData build_cifs(const RationalExp& exp, Cx c);

/// Branch j on D1: c + exp(beta (Log c + Log(z/c)) + 2 pi i j / q).
Cx cifs_branch(const CifsData& cifs, int j, Cx z);
/// |f_j'(z)| computed from the branch value: beta |w - c| / |z|.
double cifs_branch_derivative_modulus(const CifsData& cifs, int j, Cx z);

struct AttractorSample {
  std::vector<Cx> points;
  int generation = 0;
};

/// `generations` applications of the Hutchinson operator to {seed}, merging
/// points closer than 1e-12. Throws Error{InvalidArgument} unless seed is in
/// D1 and the sample stays below 2^22 points, and Error{EscapedD1} if an
/// image leaves D1.
AttractorSample hutchinson_iterate(const CifsData& cifs, Cx seed, int generations,
                                   const Executor& executor = sequential_executor());

/// Smallest g with 2 radius(D1) r^g < tolerance. Throws
/// Error{InvalidArgument} for tolerance <= 0.
int generations_for_tolerance(const CifsData& cifs, double tolerance);

/// The dual Julia set sample: {0} for c = 0, otherwise Hutchinson iterates of
/// c until 2 radius(D1) r^g < tolerance (every point is then within
/// tolerance of the attractor). Errors of build_cifs propagate.
AttractorSample dual_julia_points(const RationalExp& exp, Cx c, double tolerance,
                                  const Executor& executor = sequential_executor());

/// s* = log q / log(1/r): solves q r^s = 1. Infinite as r -> 1.
double hausdorff_upper_bound(const CifsData& cifs);
double moran_bound(int branch_count, double contraction);

// ------------------------------------------------------------------- motion

struct MotionTrack {
  std::size_t seed_id;
  /// Distinguishes cycles through the same base point.
  int branch_id;
  int period;
  /// Continued position at path[0], path[1], ...; shorter when a collision
  /// stopped the continuation.
  std::vector<Cx> positions;
  /// Path index at which two cycle points merged (branch point of the motion).
  std::optional<std::size_t> collision_step;
  /// Newton failed to follow the cycle to the next path node.
  bool diverged = false;
};

struct MotionSample {
  std::vector<Cx> base_points;
  std::vector<Cx> path;
  std::vector<MotionTrack> tracks;

  /// Values of base point seed_id at path index step.
  std::vector<Cx> tracked(std::size_t seed_id, std::size_t step) const;
};

/// Periodic points of z^beta on the unit circle (angles j/(p^n - q^n) for
/// periods n = 1..period_max, at most n_points distinct seeds) continued as
/// whole cycles along c_path. Collisions are recorded, not thrown.
/// Throws Error{InvalidArgument} unless c_path starts at 0 and
/// 1 <= period_max <= 12.
MotionSample branched_motion_sample(const RationalExp& exp, std::span<const Cx> c_path,
                                    std::size_t n_points, int period_max,
                                    const Executor& executor = sequential_executor());

/// CSV "seed_id,step,re,im,branch_id".
std::string encode_motion_csv(const MotionSample& sample);
/// CSV "gen,re,im".
std::string encode_attractor_csv(const AttractorSample& sample);
/// CSV "beta_p,beta_q,c_re,c_im,rho,r,s_star".
std::string encode_dimension_csv(const CifsData& cifs);

}  // namespace corrdyn
