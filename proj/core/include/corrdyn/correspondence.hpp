#pragma once

#include <optional>
#include <span>
#include <vector>

#include "corrdyn/types.hpp"

namespace corrdyn {

/// Exponent p/q of the multivalued power map. Stored as given: 4/2 and 2/1
/// are different correspondences.
class RationalExp {
 public:
  /// Throws Error{InvalidArgument} unless p > q >= 1.
  RationalExp(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }
  double beta() const { return static_cast<double>(p_) / q_; }

 private:
  int p_;
  int q_;
};

/// z -> w with (w - c)^q = z^p.
struct PowerCorr {
  RationalExp exp;
  Cx c;
};

enum class MatingCoords { Original, CovJ };

/// The modular-group mating family in either coordinate system:
///  Original: ((aw-1)/(w-1))^2 + ((aw-1)/(w-1))((az+1)/(z+1)) + ((az+1)/(z+1))^2 = 3
///  CovJ:     w in J(Cov(z)),  Cov: z^2 + z w + w^2 = 3,  J the involution fixing 1 and a.
class MatingCorr {
 public:
  /// Throws Error{InvalidArgument} when a == 1.
  explicit MatingCorr(Cx a, MatingCoords coords = MatingCoords::Original);

  Cx a() const { return a_; }
  MatingCoords coords() const { return coords_; }
  MatingCorr in(MatingCoords coords) const { return MatingCorr(a_, coords); }

  /// The parabolic point P: 0 in Original coordinates, 1 in CovJ coordinates.
  Cx parabolic_point() const { return coords_ == MatingCoords::Original ? Cx{0.0} : Cx{1.0}; }

 private:
  Cx a_;
  MatingCoords coords_;
};

struct Branch {
  Cx value;
  /// Derivative of the univalent branch through (source, value); empty where
  /// no univalent branch exists (critical point or vertical tangent).
  std::optional<Cx> derivative;
};

struct BranchSet {
  Cx source;
  std::vector<Branch> images;
  /// Two images coincide (discriminant zero); order between them is not meaningful.
  bool branch_point = false;
  /// Images that lie at infinity are not stored; this counts them.
  int images_at_infinity = 0;
};

// ---------------------------------------------------------------- power maps

/// The q images c + (q-th roots of z^p), ordered by argument of (w - c) in
/// [0, 2pi). z == 0 yields the single image c with no derivative.
BranchSet power_forward(const PowerCorr& corr, Cx z);

/// The p preimages: solutions z of z^p = (w - c)^q, ordered by argument of z.
/// w == c yields the single preimage 0.
BranchSet power_backward(const PowerCorr& corr, Cx w);

/// |(w - c)^q - z^p| / max(1, |z|^p).
double power_relation_residual(const PowerCorr& corr, Cx z, Cx w);

/// Writes the q forward images of z != 0 into out[0..q) in the same order as
/// power_forward, without derivatives. Hot-loop variant for the orbit search.
void power_images(const RationalExp& exp, Cx c, Cx z, Cx* out);

// ------------------------------------------------------------------- matings

/// phi_a(z) = (az + 1)/(z + 1), Original -> CovJ. Maps -1 to infinity.
RiemannPoint to_covj(Cx a, Cx z);
/// Inverse of to_covj: z = (1 - zeta)/(zeta - a). Maps a to infinity.
RiemannPoint from_covj(Cx a, Cx zeta);
/// J(zeta) = ((1 + a) zeta - 2a) / (2 zeta - (1 + a)).
RiemannPoint involution_j(Cx a, Cx zeta);

/// Throws Error{PoleInput} at z = -1 (Original coordinates).
BranchSet mating_forward(const MatingCorr& corr, Cx z);
/// Throws Error{PoleInput} at w = 1 (Original coordinates).
BranchSet mating_backward(const MatingCorr& corr, Cx w);

/// Defect of the relation with denominators cleared, divided by
/// max(1, sum of the moduli of its terms). Infinite at a pole.
double mating_relation_residual(const MatingCorr& corr, Cx z, Cx w);

// -------------------------------------------------------------- fixed points

enum class FixedPointClass { Attracting, Repelling, Parabolic, Superattracting };

struct FixedPoint {
  Cx point;
  Cx multiplier;
  FixedPointClass kind;
  /// The fixing branch has a vertical tangent; multiplier is meaningless and
  /// the point counts as repelling.
  bool multiplier_infinite = false;
};

/// lambda == 0: Superattracting; ||lambda| - 1| <= 1e-9: Parabolic; else by |lambda|.
FixedPointClass classify_multiplier(Cx lambda);

/// Solutions of (z - c)^q = z^p with the multiplier of the branch fixing them.
/// Throws Error{RootFindingFailure}.
std::vector<FixedPoint> fixed_points(const PowerCorr& corr);

/// Fixed points of the mating (roots of the relation with w = z). Always
/// contains P with multiplier 1. Throws Error{RootFindingFailure}.
std::vector<FixedPoint> fixed_points(const MatingCorr& corr);

// ------------------------------------------------------------------- cycles

/// A periodic forward orbit together with its multiplier.
struct Cycle {
  std::vector<Cx> points;
  Cx multiplier;
};

/// Follows the forward branches named by `itinerary` (indices into the
/// ordered power_forward images) starting at seed. Returns the visited points
/// z_0 .. z_{n-1} and the product of branch derivatives; closure is not
/// checked. Throws Error{InvalidArgument} for an index out of range.
Cycle follow_itinerary(const PowerCorr& corr, Cx seed, std::span<const int> itinerary);

/// max_k |(z_{k+1} - c)^q - z_k^p| / max(1, |z_k|^p) over a closed cycle.
double cycle_residual(const RationalExp& exp, Cx c, std::span<const Cx> points);

/// dz_k/dc for every point of a closed cycle (implicit function theorem on
/// the cyclic relation system). Throws Error{ContinuationCollision} when the
/// system is singular.
std::vector<Cx> cycle_tangent(const RationalExp& exp, Cx c, std::span<const Cx> points);

/// Continues a whole cycle along a parameter path by predictor-corrector
/// Newton on the system (z_{k+1} - c)^q = z_k^p, k mod n. The first path node
/// must be the parameter the cycle belongs to. Returns one cycle per node.
///
/// Throws Error{ContinuationCollision} when two cycle points merge within
/// 1e-8 or a point reaches the critical point 0, and
/// Error{NewtonDivergence} when 20 step halvings do not converge.
std::vector<std::vector<Cx>> continue_cycle(const RationalExp& exp, std::span<const Cx> cycle,
                                            std::span<const Cx> path);

/// Convenience form: seeds the cycle from `seed` and `itinerary` at path[0]
/// (residual must be <= 1e-10) and returns the continued seed point per node.
std::vector<Cx> continue_periodic_point(const RationalExp& exp, Cx seed,
                                        std::span<const int> itinerary,
                                        std::span<const Cx> path);

}  // namespace corrdyn
