#pragma once

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

// φ_λ(x) = λ^{3/2} φ(λx). Cartesian states use separable band-limited interpolation
// (points mapped outside the box read zero); radial states use the even cubic spline.
// Throws Overflow when the result carries more than overflow_tol of its mass in the
// outer shell of the box (|x|_∞ > 0.45 L, or r > 0.9 r_max).
FieldState rescale(const FieldState& s, double lambda, double overflow_tol = 1e-8);

// Fraction of the mass in the outer shell used by the overflow guard.
double boundary_mass_fraction(const FieldState& s);

// G(φ_λ) from the three primitive integrals of φ.
double scaled_pohozaev(double lambda, double kinetic, double lp, double lq, const PhysParams& params);
// S(φ_λ) and I(φ_λ) likewise (mass is scale invariant).
double scaled_action(double lambda, const Primitives& prim, const PhysParams& params);
double scaled_i_omega(double lambda, const Primitives& prim, const PhysParams& params);

// Unique root of λ ↦ G(φ_λ)/λ². Throws Domain for a zero state.
double lambda0_from(double kinetic, double lp, double lq, const PhysParams& params);
double find_lambda0(const FieldState& s, const PhysParams& params);

}  // namespace nls
