#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/executor.hpp"

namespace corrdyn {

struct EscapeParams {
  /// Orbits leaving |z| <= radius are pruned. Must be >= escape_radius(corr).
  double radius = 0.0;
  /// Number of orbit points (including the start) a bounded witness carries.
  int max_depth = 60;
  std::size_t node_budget = 1'000'000;
};

/// R = max(2^(1/(beta-1)), 2|c|). Beyond R every branch image satisfies
/// |w| >= |z|^beta - |c| >= (3/2)|z|, so all orbits escape monotonically.
double escape_radius(const PowerCorr& corr);

/// The smallest r >= 1 with r^beta - r >= |c|. Every orbit through a point
/// with |z| > r escapes, so the search prunes there as well; K_c lies in the
/// closed disk of this radius.
double trapping_radius(const PowerCorr& corr);

/// Defaults: radius = escape_radius(corr), depth 60, budget 10^6.
EscapeParams default_escape_params(const PowerCorr& corr);

enum class OrbitStatus { Bounded, Escaped, BudgetExhausted };

struct OrbitVerdict {
  OrbitStatus status = OrbitStatus::Escaped;
  /// For Bounded: max_depth orbit points, starting at the query point.
  std::vector<Cx> witness;
  std::size_t nodes = 0;
};

/// Depth-first search of the q-ary forward orbit tree for a path of
/// max_depth points inside the search disk. Branches are tried in
/// power_forward order, so the first witness found is deterministic.
/// Throws Error{InvalidArgument} for max_depth < 1 or radius below
/// escape_radius(corr).
OrbitVerdict in_filled_julia(const PowerCorr& corr, Cx z, const EscapeParams& params);

struct OmegaSample {
  /// Distinct points (merged at 1e-12) among the last `tail` entries of all
  /// surviving paths.
  std::vector<Cx> points;
  /// The node budget ran out; points is then a partial sample.
  bool truncated = false;
};

/// Finite outer sample of the omega-limit set of z. Subtrees rooted at the
/// same (level, point) are explored once. Throws Error{InvalidArgument}
/// unless 0 < tail < max_depth.
OmegaSample omega_limit_sample(const PowerCorr& corr, Cx z, const EscapeParams& params, int tail);

/// Fraction of samples that escape or whose omega sample lies within 1e-3 of
/// the attractor. Truncated samples are judged on the points found.
double basin_check(const PowerCorr& corr, std::span<const Cx> attractor,
                   std::span<const Cx> samples, const EscapeParams& params,
                   const Executor& executor = sequential_executor());

}  // namespace corrdyn
