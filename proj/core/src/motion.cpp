#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <utility>

#include "corrdyn/cifs.hpp"
#include "corrdyn/error.hpp"

namespace corrdyn {

namespace {

using Angle = std::pair<std::int64_t, std::int64_t>;  // reduced j/N

Angle reduce(std::int64_t j, std::int64_t n) {
  const std::int64_t g = std::gcd(j, n);
  return {j / g, n / g};
}

// Keeps (p + q) p^n inside int64 so the index map below cannot overflow.
std::int64_t checked_power(std::int64_t base, int n, std::int64_t bound) {
  std::int64_t v = 1;
  for (int i = 0; i < n; ++i) {
    if (v > bound / base) throw Error(Errc::InvalidArgument, "period too large for the exponent");
    v *= base;
  }
  return v;
}

// Angle numerator of the forward image that keeps the orbit on period N.
std::optional<std::int64_t> next_index(std::int64_t j, std::int64_t n, int p, int q) {
  for (int k = 0; k < q; ++k) {
    const std::int64_t num = p * j + k * n;
    if (num % q == 0) return static_cast<std::int64_t>((num / q) % n);
  }
  return std::nullopt;
}

Cx on_circle(std::int64_t j, std::int64_t n) {
  return std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(n));
}

struct SeedCycle {
  int period;
  std::vector<Cx> points;
  /// Seed id of each cycle point, or npos when the point is not a seed.
  std::vector<std::size_t> ids;
};

constexpr std::size_t kNoSeed = static_cast<std::size_t>(-1);

}  // namespace

std::vector<Cx> MotionSample::tracked(std::size_t seed_id, std::size_t step) const {
  std::vector<Cx> out;
  for (const auto& t : tracks)
    if (t.seed_id == seed_id && step < t.positions.size()) out.push_back(t.positions[step]);
  return out;
}

MotionSample branched_motion_sample(const RationalExp& exp, std::span<const Cx> c_path,
                                    std::size_t n_points, int period_max,
                                    const Executor& executor) {
  if (c_path.empty() || c_path.front() != Cx{})
    throw Error(Errc::InvalidArgument, "the parameter path must start at c = 0");
  if (period_max < 1 || period_max > 12)
    throw Error(Errc::InvalidArgument, "period_max must be in [1, 12]");
  const int p = exp.p();
  const int q = exp.q();

  MotionSample sample;
  sample.path.assign(c_path.begin(), c_path.end());
  std::map<Angle, std::size_t> seed_ids;
  std::vector<std::pair<std::int64_t, std::int64_t>> seed_angles;
  std::vector<int> seed_period;
  for (int n = 1; n <= period_max && seed_angles.size() < n_points; ++n) {
    const std::int64_t bound = (std::int64_t{1} << 62) / (p + q);
    const std::int64_t big_n = checked_power(p, n, bound) - checked_power(q, n, bound);
    for (std::int64_t j = 0; j < big_n && seed_angles.size() < n_points; ++j) {
      const Angle a = reduce(j, big_n);
      if (seed_ids.count(a)) continue;
      seed_ids.emplace(a, seed_angles.size());
      seed_angles.emplace_back(j, big_n);
      seed_period.push_back(n);
      sample.base_points.push_back(on_circle(j, big_n));
    }
  }

  // Group seeds into cycles of the angle map; each cycle is continued once.
  std::vector<SeedCycle> cycles;
  std::vector<char> covered(seed_angles.size(), 0);
  for (std::size_t s = 0; s < seed_angles.size(); ++s) {
    if (covered[s]) continue;
    const auto [j0, big_n] = seed_angles[s];
    const int n = seed_period[s];
    SeedCycle cyc{n, {}, {}};
    std::int64_t j = j0;
    bool closed = false;
    for (int step = 0; step < n; ++step) {
      cyc.points.push_back(on_circle(j, big_n));
      const auto it = seed_ids.find(reduce(j, big_n));
      cyc.ids.push_back(it == seed_ids.end() ? kNoSeed : it->second);
      const auto nj = next_index(j, big_n, p, q);
      if (!nj) break;
      j = *nj;
      if (j == j0) {
        closed = true;
        break;
      }
    }
    if (!closed) continue;
    cyc.period = static_cast<int>(cyc.points.size());
    for (const std::size_t id : cyc.ids)
      if (id != kNoSeed) covered[id] = 1;
    cycles.push_back(std::move(cyc));
  }

  struct Continued {
    std::vector<std::vector<Cx>> nodes;
    std::optional<std::size_t> collision_step;
    bool diverged = false;
  };
  std::vector<Continued> results(cycles.size());
  executor.parallel_for(cycles.size(), [&](std::size_t i) {
    Continued& r = results[i];
    std::vector<Cx> z = cycles[i].points;
    r.nodes.push_back(z);
    for (std::size_t s = 1; s < c_path.size(); ++s) {
      const Cx segment[2] = {c_path[s - 1], c_path[s]};
      try {
        z = continue_cycle(exp, z, segment).back();
      } catch (const Error& e) {
        if (e.code() == Errc::ContinuationCollision)
          r.collision_step = s;
        else
          r.diverged = true;
        return;
      }
      r.nodes.push_back(z);
    }
  });

  std::vector<int> branch_count(seed_angles.size(), 0);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    const auto& cyc = cycles[i];
    for (std::size_t k = 0; k < cyc.ids.size(); ++k) {
      if (cyc.ids[k] == kNoSeed) continue;
      MotionTrack track{cyc.ids[k], branch_count[cyc.ids[k]]++, cyc.period, {},
                        results[i].collision_step, results[i].diverged};
      track.positions.reserve(results[i].nodes.size());
      for (const auto& node : results[i].nodes) track.positions.push_back(node[k]);
      sample.tracks.push_back(std::move(track));
    }
  }
  return sample;
}

std::string encode_motion_csv(const MotionSample& sample) {
  std::string out = "seed_id,step,re,im,branch_id\n";
  char buf[128];
  for (const auto& t : sample.tracks)
    for (std::size_t s = 0; s < t.positions.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%d\n", t.seed_id, s,
                    t.positions[s].real(), t.positions[s].imag(), t.branch_id);
      out += buf;
    }
  return out;
}

}  // namespace corrdyn
