#pragma once

#include <span>
#include <string>
#include <vector>

#include "nls/evolution/trajectory.hpp"

namespace nls {

enum class ScatterVerdict { Scattering, NotScattering, Inconclusive, NotApplicable };
const char* to_string(ScatterVerdict v);

struct ScatteringOptions {
  double window_fraction = 0.5;  // asymptotic window: the last half of the time span
  std::size_t max_window = 12;   // at most this many trailing samples
  double tolerance = 1e-3;       // last increment over ‖u‖_{H¹}
};

struct ScatteringReport {
  ScatterVerdict verdict = ScatterVerdict::Inconclusive;
  std::vector<double> times;       // sample times of the window
  std::vector<double> increments;  // ‖w(t_{i+1}) − w(t_i)‖_{H¹} / ‖u‖_{H¹}, w = e^{−itΔ}u(t)
  double tolerance = 0;
  double lp_first = 0, lp_last = 0;  // ‖u‖_{L^{p+1}} at the window ends
  std::string reason;
};

// Finite-horizon heuristic: the increments of the backward-propagated states must decrease
// and end below the tolerance. Never a proof of scattering.
ScatteringReport detect_scattering(const Trajectory& traj, const ScatteringOptions& opt = {});

// y(t) ≈ c·(T − t)^β for data vanishing at T.
struct PowerFit {
  double t_star = 0;
  double exponent = 0;
  double coefficient = 0;
  double rms_log_residual = 0;
  std::size_t points = 0;
};
PowerFit fit_vanishing_power(std::span<const double> t, std::span<const double> y);

struct BlowupEstimate {
  double t_star = 0;              // mean of the two estimates
  double t_star_max_abs = 0;      // from 1/max|u|
  double t_star_gradient = 0;     // from 1/‖∇u‖
  double uncertainty = 0;         // spread of the two
  PowerFit fit_max_abs, fit_gradient;
  double window_start = 0;
  bool low_confidence = false;    // gradient norm not monotone in the fit window
  std::string note;
};

// Fits the final decade of each reciprocal series; t, max_abs and grad (= ‖∇u‖) share indices.
BlowupEstimate estimate_blowup(std::span<const double> t, std::span<const double> max_abs,
                               std::span<const double> grad);
// Uses the step log; requires termination == BlowupThreshold.
BlowupEstimate detect_blowup(const Trajectory& traj);

}  // namespace nls
