#pragma once

#include <vector>

#include "nls/diagnostics/exponents.hpp"
#include "nls/evolution/trajectory.hpp"

namespace nls {

struct WindowNorm {
  double value = 0;       // (∫_window ‖u(t)‖^{m₁}_{L^{b₁}} dt)^{1/m₁}
  double t_lo = 0, t_hi = 0;
  std::size_t samples = 0;
  bool low_resolution = false;  // fewer than 8 samples in the window
};

// Trapezoid rule over the samples inside [t_lo, t_hi].
WindowNorm scattering_window_norm(const std::vector<double>& times, const std::vector<FieldState>& states,
                                  double t_lo, double t_hi, const StrichartzExponentTable& table);
// The window must end before the run is tainted.
WindowNorm scattering_window_norm(const Trajectory& traj, double t_lo, double t_hi,
                                  const StrichartzExponentTable& table);

}  // namespace nls
