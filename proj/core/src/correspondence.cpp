#include "corrdyn/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "corrdyn/error.hpp"
#include "corrdyn/polynomial.hpp"

namespace corrdyn {

RationalExp::RationalExp(int p, int q) : p_(p), q_(q) {
  if (q < 1 || p <= q)
    throw Error(Errc::InvalidArgument,
                "exponent p/q needs p > q >= 1, got " + std::to_string(p) + "/" + std::to_string(q));
}

MatingCorr::MatingCorr(Cx a, MatingCoords coords) : a_(a), coords_(coords) {
  if (a == Cx{1.0}) throw Error(Errc::InvalidArgument, "mating parameter a must differ from 1");
  if (!is_finite(a)) throw Error(Errc::InvalidArgument, "mating parameter a must be finite");
}

// ---------------------------------------------------------------- power maps

void power_images(const RationalExp& exp, Cx c, Cx z, Cx* out) {
  const int q = exp.q();
  const double rho = std::exp(exp.beta() * std::log(std::abs(z)));
  double theta = std::fmod(exp.p() * std::arg(z), kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  const double base = theta / q;
  for (int k = 0; k < q; ++k) out[k] = c + std::polar(rho, base + kTwoPi * k / q);
}

BranchSet power_forward(const PowerCorr& corr, Cx z) {
  BranchSet set;
  set.source = z;
  if (z == Cx{}) {
    set.images.push_back({corr.c, std::nullopt});
    return set;
  }
  const int q = corr.exp.q();
  std::vector<Cx> w(static_cast<std::size_t>(q));
  power_images(corr.exp, corr.c, z, w.data());
  const double ratio = corr.exp.beta();
  set.images.reserve(w.size());
  for (const Cx& v : w) set.images.push_back({v, ratio * (v - corr.c) / z});
  return set;
}

BranchSet power_backward(const PowerCorr& corr, Cx w) {
  BranchSet set;
  set.source = w;
  const Cx d = w - corr.c;
  if (d == Cx{}) {
    set.images.push_back({Cx{}, std::nullopt});
    return set;
  }
  const int p = corr.exp.p();
  const double inv_beta = 1.0 / corr.exp.beta();
  const double rho = std::exp(inv_beta * std::log(std::abs(d)));
  double theta = std::fmod(corr.exp.q() * std::arg(d), kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  set.images.reserve(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    const Cx z = std::polar(rho, (theta + kTwoPi * k) / p);
    set.images.push_back({z, inv_beta * z / d});
  }
  return set;
}

double power_relation_residual(const PowerCorr& corr, Cx z, Cx w) {
  const Cx lhs = ipow(w - corr.c, corr.exp.q());
  const Cx rhs = ipow(z, corr.exp.p());
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

// ------------------------------------------------------------------- matings

RiemannPoint to_covj(Cx a, Cx z) {
  if (z == Cx{-1.0}) return RiemannPoint::infinity();
  return RiemannPoint((a * z + 1.0) / (z + 1.0));
}

RiemannPoint from_covj(Cx a, Cx zeta) {
  if (zeta == a) return RiemannPoint::infinity();
  return RiemannPoint((1.0 - zeta) / (zeta - a));
}

RiemannPoint involution_j(Cx a, Cx zeta) {
  const Cx den = 2.0 * zeta - (1.0 + a);
  if (den == Cx{}) return RiemannPoint::infinity();
  return RiemannPoint(((1.0 + a) * zeta - 2.0 * a) / den);
}

namespace {

Cx j_derivative(Cx a, Cx zeta) {
  const Cx den = 2.0 * zeta - (1.0 + a);
  return -(a - 1.0) * (a - 1.0) / (den * den);
}

// Roots y of x^2 + x y + y^2 = 3, "+" root first.
struct CovRoots {
  Cx plus;
  Cx minus;
  bool coincide;
};

CovRoots cov_roots(Cx x) {
  const Cx disc = 12.0 - 3.0 * x * x;
  const Cx s = std::sqrt(disc);
  const bool coincide = std::abs(disc) <= 1e-12 * std::max(1.0, 3.0 * std::norm(x));
  return {(-x + s) / 2.0, (-x - s) / 2.0, coincide};
}

// dy/dx along the Cov branch through (x, y); empty at the vertical tangent.
std::optional<Cx> cov_slope(Cx x, Cx y, bool coincide) {
  const Cx den = x + 2.0 * y;
  if (coincide || den == Cx{}) return std::nullopt;
  return -(2.0 * x + y) / den;
}

std::optional<Cx> times(std::optional<Cx> lhs, Cx rhs) {
  if (!lhs) return std::nullopt;
  return *lhs * rhs;
}

}  // namespace

BranchSet mating_forward(const MatingCorr& corr, Cx z) {
  const Cx a = corr.a();
  BranchSet set;
  set.source = z;
  if (corr.coords() == MatingCoords::Original) {
    if (z == Cx{-1.0}) throw Error(Errc::PoleInput, "z = -1 is a pole of the forward map");
    const Cx u = (a * z + 1.0) / (z + 1.0);
    const CovRoots roots = cov_roots(u);
    set.branch_point = roots.coincide;
    const Cx zp1 = z + 1.0;
    for (const Cx v : {roots.plus, roots.minus}) {
      if (v == a) {
        ++set.images_at_infinity;
        continue;
      }
      const Cx w = (v - 1.0) / (v - a);
      // u = phi(z), v = phi(-w): dw/dz = -(dv/du) * phi'(z) / phi'(-w).
      const Cx scale = (w - 1.0) * (w - 1.0) / (zp1 * zp1);
      const auto slope = cov_slope(u, v, roots.coincide);
      set.images.push_back({w, slope ? std::optional<Cx>(-*slope * scale) : std::nullopt});
    }
    return set;
  }
  const CovRoots roots = cov_roots(z);
  set.branch_point = roots.coincide;
  for (const Cx y : {roots.plus, roots.minus}) {
    const RiemannPoint w = involution_j(a, y);
    if (w.is_infinity()) {
      ++set.images_at_infinity;
      continue;
    }
    set.images.push_back({w.value(), times(cov_slope(z, y, roots.coincide), j_derivative(a, y))});
  }
  return set;
}

BranchSet mating_backward(const MatingCorr& corr, Cx w) {
  const Cx a = corr.a();
  BranchSet set;
  set.source = w;
  if (corr.coords() == MatingCoords::Original) {
    if (w == Cx{1.0}) throw Error(Errc::PoleInput, "w = 1 is a pole of the backward map");
    const Cx v = (a * w - 1.0) / (w - 1.0);
    const CovRoots roots = cov_roots(v);
    set.branch_point = roots.coincide;
    const Cx wm1 = w - 1.0;
    for (const Cx u : {roots.plus, roots.minus}) {
      if (u == a) {
        ++set.images_at_infinity;
        continue;
      }
      const Cx z = (1.0 - u) / (u - a);
      const Cx scale = (z + 1.0) * (z + 1.0) / (wm1 * wm1);
      const auto slope = cov_slope(v, u, roots.coincide);
      set.images.push_back({z, slope ? std::optional<Cx>(-*slope * scale) : std::nullopt});
    }
    return set;
  }
  const RiemannPoint zeta = involution_j(a, w);
  if (zeta.is_infinity()) {
    set.images_at_infinity = 2;
    return set;
  }
  const CovRoots roots = cov_roots(zeta.value());
  set.branch_point = roots.coincide;
  const Cx jd = j_derivative(a, w);
  for (const Cx z : {roots.plus, roots.minus})
    set.images.push_back({z, times(cov_slope(zeta.value(), z, roots.coincide), jd)});
  return set;
}

double mating_relation_residual(const MatingCorr& corr, Cx z, Cx w) {
  const Cx a = corr.a();
  // x = X/Xd, y = Y/Yd; relation X^2 Yd^2 + X Xd Y Yd + Y^2 Xd^2 - 3 Xd^2 Yd^2.
  Cx x, xd, y, yd;
  if (corr.coords() == MatingCoords::Original) {
    x = a * z + 1.0;
    xd = z + 1.0;
    y = a * w - 1.0;
    yd = w - 1.0;
  } else {
    x = z;
    xd = 1.0;
    y = (1.0 + a) * w - 2.0 * a;
    yd = 2.0 * w - (1.0 + a);
  }
  if (!is_finite(x) || !is_finite(y)) return std::numeric_limits<double>::infinity();
  const Cx t1 = x * x * yd * yd;
  const Cx t2 = x * xd * y * yd;
  const Cx t3 = y * y * xd * xd;
  const Cx t4 = 3.0 * xd * xd * yd * yd;
  const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  return std::abs(t1 + t2 + t3 - t4) / std::max(1.0, scale);
}

// -------------------------------------------------------------- fixed points

FixedPointClass classify_multiplier(Cx lambda) {
  const double m = std::abs(lambda);
  if (m <= 1e-12) return FixedPointClass::Superattracting;
  if (std::abs(m - 1.0) <= 1e-9) return FixedPointClass::Parabolic;
  return m < 1.0 ? FixedPointClass::Attracting : FixedPointClass::Repelling;
}

namespace {

// Collapses numerically repeated roots (a multiple root comes back as a
// cluster of size about eps^(1/m)).
std::vector<Cx> distinct_roots(std::vector<Cx> roots, double tol) {
  std::vector<Cx> out;
  for (const Cx& r : roots) {
    bool dup = false;
    for (Cx& o : out) {
      if (std::abs(r - o) <= tol * std::max(1.0, std::abs(o))) {
        if (r == Cx{}) o = r;
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<FixedPoint> fixed_points(const PowerCorr& corr) {
  const int p = corr.exp.p();
  const int q = corr.exp.q();
  Poly coeffs = binomial_power(-corr.c, q);
  coeffs.resize(static_cast<std::size_t>(p) + 1, Cx{});
  coeffs[static_cast<std::size_t>(p)] -= 1.0;
  const auto roots = distinct_roots(poly_roots(coeffs, 1e-10), 1e-6);

  std::vector<FixedPoint> out;
  out.reserve(roots.size());
  for (const Cx& z : roots) {
    // The fixing branch is the one with w = z, so its derivative is (p/q)(z - c)/z.
    const Cx lambda = (z == Cx{}) ? Cx{} : corr.exp.beta() * (z - corr.c) / z;
    out.push_back({z, lambda, classify_multiplier(lambda)});
  }
  return out;
}

std::vector<FixedPoint> fixed_points(const MatingCorr& corr) {
  const Cx a = corr.a();
  const MatingCorr original = corr.in(MatingCoords::Original);
  // With w = z the relation reduces to z^2 [ (3a^2 - 3) z^2 + (a - 1)(a - 7) ] = 0.
  // The factor z^2 is P = 0, a double root with multiplier exactly 1.
  std::vector<Cx> points;
  const Poly quad{(a - 1.0) * (a - 7.0), Cx{}, 3.0 * a * a - 3.0};
  for (const Cx& r : poly_roots(quad, 1e-10)) points.push_back(r);

  std::vector<FixedPoint> out;
  const auto express = [&](Cx z) -> RiemannPoint {
    return corr.coords() == MatingCoords::Original ? RiemannPoint(z) : to_covj(a, z);
  };
  out.push_back({corr.parabolic_point(), Cx{1.0}, FixedPointClass::Parabolic});
  for (const Cx& z : distinct_roots(points, 1e-6)) {
    if (z == Cx{} || z == Cx{-1.0}) continue;
    const RiemannPoint where = express(z);
    if (where.is_infinity()) continue;
    const BranchSet images = mating_forward(original, z);
    const Branch* fixing = nullptr;
    for (const auto& b : images.images)
      if (!fixing || std::abs(b.value - z) < std::abs(fixing->value - z)) fixing = &b;
    if (!fixing) continue;
    if (!fixing->derivative) {
      out.push_back({where.value(), Cx{}, FixedPointClass::Repelling, true});
      continue;
    }
    const Cx lambda = *fixing->derivative;
    out.push_back({where.value(), lambda, classify_multiplier(lambda)});
  }
  return out;
}

}  // namespace corrdyn
