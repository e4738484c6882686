#pragma once

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"

namespace nls {

// Split-step propagator on either grid; one instance per trajectory. Cartesian fields use the periodic Fourier basis;
// radial fields use the sine basis of v = r·u (Dirichlet at 0 and r_{m+1}), the same modes
// radial::sine_kinetic measures.
class SplitStepper {
 public:
  SplitStepper(const Grid& grid, const PhysParams& params);

  const Grid& grid() const { return grid_; }

  // u <- e^{iτΔ}u. Returns ∫|∇u|², which the diagonal step leaves unchanged.
  double kinetic(CField& u, double tau) const;
  // u <- u·exp(−iτ(|u|^{q−1} − |u|^{p−1})). Returns max|u|, also unchanged.
  double nonlinear(CField& u, double tau) const;

  struct StepInfo {
    double kinetic;   // ∫|∇u|² after the step
    double max_abs;   // max|u| after the step
    bool finite;
  };
  // Strang: half kinetic, full nonlinear, half kinetic. dt < 0 runs backward and is the
  // exact inverse of the forward step.
  StepInfo step(CField& u, double dt) const;

  // Fraction of the spectral power carried by the top third of the modes.
  double spectral_tail(const CField& u) const;

 private:
  Grid grid_;
  PhysParams params_;
  RField k2_;  // |k|² per Fourier index, or κ² per sine mode
  // e^{−iτk²} times the transform normalization, cached for the last τ (fixed-step runs
  // reuse it); a stepper is therefore not shared between threads
  const CField& phases(double tau) const;
  mutable CField phase_;
  mutable double phase_tau_ = 0.0;
};

FieldState strang_step(const FieldState& state, double dt, const PhysParams& params);
FieldState free_evolve(const FieldState& state, double t);

}  // namespace nls
