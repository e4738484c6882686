#pragma once

#include <span>
#include <string>
#include <vector>

#include "nls/evolution/detect.hpp"

namespace nls {

enum class RateSymmetry { Radial, Cylindrical };
const char* to_string(RateSymmetry s);
RateSymmetry parse_rate_symmetry(const std::string& s);

// Exponent e in g(t) ≤ C(T*−t)^e: 2(5−p)/(p+3) radial, 4(3−p)/(5−p) cylindrical (p < 3).
double predicted_rate_exponent(double p, RateSymmetry sym);
// Exponent a in ‖∇u(t_n)‖ ≤ C(T*−t_n)^{−a}: 2(p−1)/(p+3) radial, (p−1)/(5−p) cylindrical.
double predicted_gradient_exponent(double p, RateSymmetry sym);

struct RateFit {
  double t_star = 0;
  double exponent_fitted = 0;    // slope of log g against log(T*−t) in the window
  double exponent_predicted = 0;
  double constant_fitted = 0;    // max of g/(T*−t)^{e_pred} in the window
  double t_lo = 0, t_hi = 0;     // window in t
  double max_ratio_drift = 0;    // sup of g/(T*−t)^{e_pred} over its median
  double min_ratio_drift = 0;    // median over the inf
  double gradient_exponent_fitted = 0;    // a in 1/‖∇u‖ ≈ c(T*−t)^a
  double gradient_exponent_predicted = 0;
  double gradient_constant = 0;  // max of ‖∇u‖(T*−t)^{a_pred} in the window
  bool gradient_bound_consistent = false;  // fitted a ≤ predicted a + 1e−2
  std::size_t window_points = 0;
  std::vector<double> times, g;  // g(t) at every input time
};

// g(t) = ∫_t^{T*} (T*−τ)‖∇u(τ)‖² dτ by the trapezoid rule over the series plus the
// integral of the fitted power law beyond the last time. T* and the power law come from
// the final decade of 1/‖∇u‖; the window is the final decade of T*−t.
RateFit rate_fit(std::span<const double> t, std::span<const double> kinetic, double p, RateSymmetry sym);
// Uses the step log of a run that hit the blow-up threshold.
RateFit blowup_rate_check(const Trajectory& traj, RateSymmetry sym);

}  // namespace nls
