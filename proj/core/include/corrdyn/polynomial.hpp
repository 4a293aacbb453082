#pragma once

#include <span>
#include <vector>

#include "corrdyn/types.hpp"

namespace corrdyn {

/// Polynomials are coefficient vectors, lowest degree first.
using Poly = std::vector<Cx>;

Cx poly_eval(std::span<const Cx> coeffs, Cx z);

/// |P(z)| divided by sum |a_k| |z|^k: the backward error of z as a root.
double poly_scaled_residual(std::span<const Cx> coeffs, Cx z);

Poly poly_mul(std::span<const Cx> lhs, std::span<const Cx> rhs);
Poly poly_add(std::span<const Cx> lhs, std::span<const Cx> rhs);
Poly poly_scale(std::span<const Cx> coeffs, Cx factor);
/// (x + shift)^n expanded.
Poly binomial_power(Cx shift, int n);

/// All roots of the polynomial, counted with multiplicity, by Aberth-Ehrlich
/// simultaneous iteration. Exact zero low-order coefficients are split off as
/// roots at 0 before iterating. A run that stalls is restarted from randomly
/// perturbed starting points (fixed seed, so results are reproducible).
///
/// Throws Error{RootFindingFailure} when some root cannot be brought to
/// scaled residual <= tolerance.
std::vector<Cx> poly_roots(std::span<const Cx> coeffs, double tolerance = 1e-10);

}  // namespace corrdyn
