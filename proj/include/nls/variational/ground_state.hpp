#pragma once

#include <optional>
#include <string>

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"

namespace nls {

struct GroundState {
  RadialGrid grid{30.0, 24000};
  RField profile;
  PhysParams params;
  double omega = 0;
  double m_omega = 0;
  double ode_residual = 0;
  double pohozaev_residual = 0;
  double amplitude = 0;  // ψ(0)
  std::string method;
  int iterations = 0;

  FieldState state() const;
};

// Fill in m_omega and the residual certificates for a radial profile.
GroundState certify(const RadialGrid& grid, RField profile, const PhysParams& params, std::string method);

RadialGrid default_ground_state_grid();

// Replace the profile from the first node that is non-positive, non-decreasing or
// below rel_floor·ψ(r_1) by the decaying solution C e^{-√ω r}/r of the linearized
// equation, matched at the previous node.
void attach_exponential_tail(const RadialGrid& grid, RField& psi, double omega, double rel_floor = 1e-10);

struct ShootingOptions {
  std::optional<double> a_lo;  // default ψ_guess/10 with ψ_guess = (2ω)^{1/(p-1)}
  std::optional<double> a_hi;  // default 10·ψ_guess
  double rtol = 1e-13;
  double atol = 1e-15;
  int max_bisections = 200;
};

// Shoots ψ'' + (2/r)ψ' = ωψ + |ψ|^{q-1}ψ - |ψ|^{p-1}ψ from ψ(0)=A, ψ'(0)=0 and bisects
// A between undershoot (ψ turns back up while positive) and overshoot (ψ crosses zero).
// Throws NoBracket when the endpoints do not straddle the ground state.
GroundState ground_state_shooting(const PhysParams& params, const RadialGrid& grid, const ShootingOptions& opt = {});

struct FlowOptions {
  int max_iterations = 40000;
  int window = 50;
  double rel_tol = 1e-10;
  double rescale_threshold = 1e-2;
  std::optional<double> reference_m;  // shooting value; stalling above it by rel 1e-2 is an error
  std::optional<RField> initial;      // default: Gaussian rescaled onto G = 0
  // Called with (iteration, I_ω of the rescaled iterate, G of the iterate).
  std::function<void(int, double, double)> on_iterate;
};

// Preconditioned descent of I_ω over radial profiles restricted to G ≤ 0: every
// iterate is measured at its λ₀ rescale, where S_ω = I_ω, and physically rescaled onto
// G = 0 whenever λ₀ drifts past the threshold. The result is rescaled so G = 0.
GroundState ground_state_flow(const PhysParams& params, const RadialGrid& grid, const FlowOptions& opt = {});

// Radial profile sampled at |x| by cubic spline.
FieldState lift_to_cartesian(const FieldState& radial, const CartesianGrid& g);

}  // namespace nls
