#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace corrdyn {

using Cx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point of the Riemann sphere. Finite points carry their coordinate;
/// the point at infinity is an explicit state rather than an Inf double.
class RiemannPoint {
 public:
  RiemannPoint() = default;
  explicit RiemannPoint(Cx z) : z_(z) {}
  static RiemannPoint infinity() {
    RiemannPoint p;
    p.infinite_ = true;
    return p;
  }

  bool is_infinity() const { return infinite_; }
  Cx value() const { return z_; }

  /// Chordal distance on the unit sphere (diameter 2).
  friend double chordal_distance(const RiemannPoint& x, const RiemannPoint& y);

 private:
  Cx z_{};
  bool infinite_ = false;
};

inline double chordal_distance(const RiemannPoint& x, const RiemannPoint& y) {
  if (x.infinite_ && y.infinite_) return 0.0;
  if (x.infinite_) return 2.0 / std::sqrt(1.0 + std::norm(y.z_));
  if (y.infinite_) return 2.0 / std::sqrt(1.0 + std::norm(x.z_));
  return 2.0 * std::abs(x.z_ - y.z_) /
         (std::sqrt(1.0 + std::norm(x.z_)) * std::sqrt(1.0 + std::norm(y.z_)));
}

/// Closed round disk in the plane.
struct Disk {
  Cx center;
  double radius = 0.0;

  bool contains(Cx z, double slack = 0.0) const {
    return std::abs(z - center) <= radius + slack;
  }
};

inline bool is_finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// z^n for n >= 0 by repeated squaring (exact branch-free integer power).
inline Cx ipow(Cx z, int n) {
  Cx acc{1.0};
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

}  // namespace corrdyn
