#pragma once

#include <vector>

#include "nls/evolution/trajectory.hpp"
#include "nls/weights/virial_weight.hpp"

namespace nls {

struct VirialValues {
  double v = 0;       // ∫φ|u|²
  double v_dot = 0;   // 2 Im∫∇φ·∇u ū
  double v_ddot = 0;  // −∫Δ²φ|u|² + 4Re∫∂²_{jk}φ ∂_ju ∂_kū + 2(q−1)/(q+1)∫Δφ|u|^{q+1} − 2(p−1)/(p+1)∫Δφ|u|^{p+1}
  double pohozaev = 0;
  double kinetic = 0;
};
VirialValues virial_values(const FieldState& s, const VirialWeight& w, const PhysParams& params);

struct VirialSeries {
  VirialWeight weight;
  std::vector<double> times, v, v_dot, v_ddot, g_pohozaev, kinetic;
  explicit VirialSeries(VirialWeight w) : weight(std::move(w)) {}
};
VirialSeries virial_series(const Trajectory& traj, const VirialWeight& weight);
VirialSeries virial_series(const std::vector<FieldState>& states, const VirialWeight& weight,
                           const PhysParams& params);

// Centered differences of V over uniformly spaced interior samples against the analytic
// V′ and V″, relative to the largest magnitude of V″ (resp. V′) in the series.
struct VirialFdCheck {
  double spacing = 0;
  double first = 0;   // max |δV/2Δ − V′| / max|V′|
  double second = 0;  // max |δ²V/Δ² − V″| / max|V″|
  std::size_t points = 0;
};
VirialFdCheck virial_fd_check(const VirialSeries& s, std::size_t every = 1);

// max over samples of |V″ − 8G|/(|8G| + 1e−12).
double virial_identity_residual(const VirialSeries& s);

// Instantiation of the localized virial inequality
//   V″ ≤ 8G + Cϱ⁻² + Cϱ^{−a}‖∇u‖^{b}
// with (a, b) = (p−1, (p−1)/2) for radial weights and ((p−1)/2, p−1) for the cylinder.
// C is the smallest nonnegative constant making the slack nonnegative on the calibration
// series; the slack is then evaluated on the evaluation series.
struct VirialEstimate {
  double constant = 0;
  double rho = 0;
  std::vector<double> times, slack;
  std::vector<double> rho2_term;  // C ϱ⁻²
  double min_slack = 0;
};
VirialEstimate virial_estimate_check(const VirialSeries& calibration, const VirialSeries& evaluation,
                                     const PhysParams& params);
// The weight kind must match the symmetry of the run: RadialRho on radial grids,
// CylindricalRho on Cartesian ones.
VirialEstimate virial_estimate_check(const Trajectory& traj, const VirialWeight& weight);

}  // namespace nls
