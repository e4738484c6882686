#pragma once

#include <vector>

#include "nls/diagnostics/boost.hpp"
#include "nls/evolution/trajectory.hpp"

namespace nls {

struct CoercivityOptions {
  std::vector<double> radii{8.0, 12.0, 16.0};
  double stride_factor = 0.25;    // z lattice stride = factor·R
  double eta = 0.5;
  double mass_floor = 1e-10;      // z kept where the localized mass exceeds this times M(u)
  std::size_t sample_stride = 1;  // use every k-th trajectory sample
  double noise = 1e-3;            // tolerance of the monotonicity observation
  bool keep_points = false;       // record every evaluated (t, z, R); radial scans keep one z per shell
};

struct CoercivityPoint {
  double t = 0;
  Vec3 z{0, 0, 0};
  double radius = 0;
  Vec3 xi{0, 0, 0};
  LocalizedPohozaev value;
};

struct CoercivityScan {
  double delta_hat = 0;        // min over (t, z, R) of G(χu^ξ)/‖∇(χu^ξ)‖²; +∞ when vacuous
  CoercivityPoint argmin;
  std::vector<double> radii;
  std::vector<double> min_per_radius;
  bool monotone = true;        // min_per_radius nondecreasing within the noise
  bool vacuous = false;        // every sample was identically zero
  std::size_t evaluations = 0;
  std::vector<CoercivityPoint> points;
};

// ξ is the unsnapped optimal ξ of each (t, z, R): the boosted kinetic term is evaluated
// through the product rule, so no field is multiplied by e^{ix·ξ} and no periodicity is needed.
CoercivityScan coercivity_scan(const std::vector<FieldState>& states, const PhysParams& params,
                               const CoercivityOptions& opt = {});
CoercivityScan coercivity_scan(const Trajectory& traj, const CoercivityOptions& opt = {});

struct InteractionOptions {
  double r_lo = 4.0, r_hi = 16.0;
  int n_r = 3;                 // logarithmic R nodes, trapezoid in ln R
  double stride_factor = 0.25;
  double eta = 0.5;
  double t_lo = 0, t_hi = 0;   // window; t_hi <= t_lo means the whole trajectory
  double budget = 2e10;        // limit on the estimated number of point evaluations
};

struct InteractionAverage {
  double value = 0;
  double window_lo = 0, window_hi = 0;
  std::size_t samples = 0;
  std::size_t z_points = 0;
  double estimated_cost = 0;
};

// (1/(J·T₀)) ∫∫ R⁻³ Σ_z stride³ ∫|χ_R(y−z)u|² dy · ‖∇(χ_R(·−z)u^ξ)‖² (dR/R) dt with
// J = ln(R_hi/R_lo) and T₀ the window length. Refuses with a Budget error above opt.budget.
InteractionAverage averaged_interaction(const std::vector<double>& times,
                                        const std::vector<FieldState>& states,
                                        const PhysParams& params, const InteractionOptions& opt);
InteractionAverage averaged_interaction(const Trajectory& traj, const InteractionOptions& opt);

}  // namespace nls
