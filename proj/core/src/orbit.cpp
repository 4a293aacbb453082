#include "corrdyn/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "corrdyn/error.hpp"

namespace corrdyn {

double escape_radius(const PowerCorr& corr) {
  const double beta = corr.exp.beta();
  return std::max(std::pow(2.0, 1.0 / (beta - 1.0)), 2.0 * std::abs(corr.c));
}

double trapping_radius(const PowerCorr& corr) {
  const double beta = corr.exp.beta();
  const double mag = std::abs(corr.c);
  if (mag == 0.0) return 1.0;
  // r^beta - r is increasing on [1, inf); bracket the root between 1 and R.
  double lo = 1.0;
  double hi = escape_radius(corr);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::pow(mid, beta) - mid >= mag)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

EscapeParams default_escape_params(const PowerCorr& corr) {
  EscapeParams params;
  params.radius = escape_radius(corr);
  return params;
}

namespace {

// Forward images with the q-th roots of unity precomputed.
class Stepper {
 public:
  explicit Stepper(const PowerCorr& corr)
      : c_(corr.c), abs_c_(std::abs(corr.c)), beta_(corr.exp.beta()), p_(corr.exp.p()),
        q_(corr.exp.q()) {
    unity_.reserve(static_cast<std::size_t>(q_));
    for (int k = 0; k < q_; ++k) unity_.push_back(std::polar(1.0, kTwoPi * k / q_));
  }

  int branches() const { return q_; }

  // Writes the images of z with |w| <= limit into out; returns how many.
  int images_within(Cx z, double limit, Cx* out) const {
    if (z == Cx{}) {
      if (abs_c_ > limit) return 0;
      out[0] = c_;
      return 1;
    }
    const double rho = std::exp(beta_ * std::log(std::abs(z)));
    if (rho - abs_c_ > limit) return 0;
    double theta = std::fmod(p_ * std::arg(z), kTwoPi);
    if (theta < 0.0) theta += kTwoPi;
    const Cx base = std::polar(rho, theta / q_);
    int count = 0;
    const bool all_inside = rho + abs_c_ <= limit;
    for (int k = 0; k < q_; ++k) {
      const Cx w = c_ + base * unity_[static_cast<std::size_t>(k)];
      if (all_inside || std::abs(w) <= limit) out[count++] = w;
    }
    return count;
  }

 private:
  Cx c_;
  double abs_c_;
  double beta_;
  int p_;
  int q_;
  std::vector<Cx> unity_;
};

double prune_radius(const PowerCorr& corr, const EscapeParams& params) {
  if (params.max_depth < 1) throw Error(Errc::InvalidArgument, "max_depth must be >= 1");
  const double required = escape_radius(corr);
  if (!(params.radius >= required * (1.0 - 1e-12)))
    throw Error(Errc::InvalidArgument, "search radius " + std::to_string(params.radius) +
                                           " is below the escape radius " +
                                           std::to_string(required));
  return std::min(params.radius, trapping_radius(corr) * (1.0 + 1e-9));
}

}  // namespace

OrbitVerdict in_filled_julia(const PowerCorr& corr, Cx z, const EscapeParams& params) {
  const double limit = prune_radius(corr, params);
  OrbitVerdict verdict;
  if (!(std::abs(z) <= limit)) return verdict;
  const auto depth = static_cast<std::size_t>(params.max_depth);
  if (depth == 1) {
    verdict.status = OrbitStatus::Bounded;
    verdict.witness = {z};
    return verdict;
  }

  const Stepper step(corr);
  const auto q = static_cast<std::size_t>(step.branches());
  std::vector<Cx> path(depth);
  std::vector<Cx> children(depth * q);
  std::vector<int> next(depth, 0);
  std::vector<int> count(depth, 0);

  path[0] = z;
  std::size_t level = 0;
  count[0] = step.images_within(z, limit, &children[0]);
  verdict.nodes = 1;
  for (;;) {
    if (next[level] < count[level]) {
      const Cx w = children[level * q + static_cast<std::size_t>(next[level]++)];
      path[level + 1] = w;
      if (level + 2 == depth) {
        verdict.status = OrbitStatus::Bounded;
        verdict.witness = std::move(path);
        return verdict;
      }
      if (++verdict.nodes > params.node_budget) {
        verdict.status = OrbitStatus::BudgetExhausted;
        return verdict;
      }
      ++level;
      next[level] = 0;
      count[level] = step.images_within(w, limit, &children[level * q]);
    } else {
      if (level == 0) return verdict;
      --level;
    }
  }
}

namespace {

struct NodeKey {
  int level;
  std::int64_t re;
  std::int64_t im;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  std::size_t operator()(const NodeKey& k) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(k.level) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(k.re) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.im) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

class OmegaSearch {
 public:
  OmegaSearch(const PowerCorr& corr, const EscapeParams& params, int tail)
      : step_(corr), limit_(prune_radius(corr, params)), depth_(params.max_depth),
        first_tail_(params.max_depth - tail), budget_(params.node_budget),
        quantum_(1e-12 * std::max(1.0, limit_)) {}

  OmegaSample run(Cx z) {
    if (std::abs(z) <= limit_) survives(0, z);
    return std::move(sample_);
  }

 private:
  NodeKey key(int level, Cx z) const {
    return {level, std::llround(z.real() / quantum_), std::llround(z.imag() / quantum_)};
  }

  void record(Cx z) {
    const NodeKey k = key(0, z);
    if (seen_points_.emplace(k, true).second) sample_.points.push_back(z);
  }

  bool survives(int level, Cx z) {
    if (level == depth_ - 1) {
      if (level >= first_tail_) record(z);
      return true;
    }
    const NodeKey k = key(level, z);
    if (const auto it = memo_.find(k); it != memo_.end()) return it->second;
    if (sample_.truncated) return false;
    if (++nodes_ > budget_) {
      sample_.truncated = true;
      return false;
    }
    std::vector<Cx> children(static_cast<std::size_t>(step_.branches()));
    const int n = step_.images_within(z, limit_, children.data());
    bool any = false;
    for (int i = 0; i < n; ++i) any = survives(level + 1, children[static_cast<std::size_t>(i)]) || any;
    if (any && level >= first_tail_) record(z);
    if (!sample_.truncated) memo_.emplace(k, any);
    return any;
  }

  Stepper step_;
  double limit_;
  int depth_;
  int first_tail_;
  std::size_t budget_;
  double quantum_;
  std::size_t nodes_ = 0;
  OmegaSample sample_;
  std::unordered_map<NodeKey, bool, NodeKeyHash> memo_;
  std::unordered_map<NodeKey, bool, NodeKeyHash> seen_points_;
};

}  // namespace

OmegaSample omega_limit_sample(const PowerCorr& corr, Cx z, const EscapeParams& params, int tail) {
  if (tail < 1 || tail >= params.max_depth)
    throw Error(Errc::InvalidArgument, "tail must satisfy 0 < tail < max_depth");
  OmegaSearch search(corr, params, tail);
  return search.run(z);
}

double basin_check(const PowerCorr& corr, std::span<const Cx> attractor,
                   std::span<const Cx> samples, const EscapeParams& params,
                   const Executor& executor) {
  if (samples.empty()) return 0.0;
  const int tail = std::max(1, std::min(10, params.max_depth / 4));
  std::vector<char> attracted(samples.size(), 0);
  executor.parallel_for(samples.size(), [&](std::size_t i) {
    const OmegaSample omega = omega_limit_sample(corr, samples[i], params, tail);
    if (omega.points.empty()) {
      attracted[i] = omega.truncated ? 0 : 1;
      return;
    }
    const bool near = std::all_of(omega.points.begin(), omega.points.end(), [&](Cx w) {
      return std::any_of(attractor.begin(), attractor.end(),
                         [&](Cx a) { return std::abs(w - a) <= 1e-3; });
    });
    attracted[i] = near ? 1 : 0;
  });
  const auto hits = std::count(attracted.begin(), attracted.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace corrdyn
