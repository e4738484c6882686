#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls {

struct RadialValue {
  double value;
  double derivative;
};

// χ for a given η, unit radius: 1 on [0, 1-η], 0 on [1, ∞), smooth bump bridge between.
struct ChiValue {
  double v, d1, d2;
};
ChiValue chi_profile(double eta, double r);
// Dense-sampling estimate of η·max|χ'| (the constant in |χ'| <= C/η).
double chi_derivative_constant(double eta, int samples = 100000);

// The cutoff family at unit radius; every R-dependent profile is f(|x|/R).
//   Φ_f(y) = (1/ω₃) ∫ χ²(y-z) f(z) dz for f = χ², χ^{p+1}, χ^{q+1}, and Ψ(y) = (1/y)∫₀^y Φ.
// Profiles come from the 1-D radial convolution formula evaluated by adaptive Gauss-Kronrod
// on a node table, then cubic Hermite interpolation (values and exact derivatives).
class CutoffProfiles {
 public:
  CutoffProfiles(double eta, double p, double q, int nodes = 16384);

  double eta() const { return eta_; }
  double p() const { return p_; }
  double q() const { return q_; }

  RadialValue phi(double y) const { return eval(phi_, y); }
  RadialValue phi_p(double y) const { return eval(phi_p_, y); }
  RadialValue phi_q(double y) const { return eval(phi_q_, y); }
  RadialValue psi(double y) const;
  // ∫₀² Φ: ψ_R(x)|x| equals this times R once |x| >= 2R.
  double psi_tail_constant() const { return tail_; }

  // Direct evaluation of Φ_f at one point, bypassing the table (test oracle).
  enum class Which { Phi, PhiP, PhiQ };
  RadialValue direct(Which which, double y) const;

  // Process-wide cache; profiles are immutable so sharing is free.
  static std::shared_ptr<const CutoffProfiles> get(double eta, double p, double q);

 private:
  struct Table {
    RField v, d;
  };
  RadialValue eval(const Table& t, double y) const;
  double G(double t) const;
  double k(double t) const;

  double eta_, p_, q_;
  int nodes_;
  double dy_;
  Table phi_, phi_p_, phi_q_, psi_;
  double tail_ = 0.0;
  // quintic Hermite table of G(t) = ∫₀^t τχ²(τ)dτ on the transition [1-η, 1]
  RField g_val_, g_k_, g_dk_;
  double g_h_ = 0.0, g_end_ = 0.0;
};

struct CutoffFamily {
  double eta = 0.1;
  double radius = 8.0;
  std::shared_ptr<const CutoffProfiles> profiles;

  // Tabulations on the grid, centered at the origin; empty for untabulated families.
  std::optional<CartesianGrid> grid;
  RField chi, phi, phi_p, phi_q, psi, grad_phi, grad_psi;

  bool tabulated() const { return grid.has_value(); }

  ChiValue chi_at(double r) const;  // derivatives in r
  RadialValue phi_at(double r) const;
  RadialValue phi_p_at(double r) const;
  RadialValue phi_q_at(double r) const;
  RadialValue psi_at(double r) const;
};

// Profile-only family for kernels that are evaluated pointwise (Morawetz, coercivity).
CutoffFamily build_cutoff_profile(double eta, double radius, double p, double q);
// Profiles plus grid tabulations. Requires 2R <= L/4 so a zero-padded convolution of
// χ_R² with itself fits the box (the fft cross-check below).
CutoffFamily build_cutoff_family(double eta, double radius, const CartesianGrid& g, double p,
                                 double q);

struct CutoffProperty {
  std::string property;
  double worst_margin;     // min over the tabulation of (bound − lhs); negative is a violation
  double fitted_constant;  // smallest constant making the shape bound hold
  double pinned_constant;  // constant the margin is measured against
  double location;         // |x| where the worst margin occurs
  double violation() const { return worst_margin < 0 ? -worst_margin : 0.0; }
};

// The six pointwise inequalities plus the ψ_R <= C min{1, R/|x|} bound. Failures are
// reported through the margins, never thrown.
std::vector<CutoffProperty> verify_cutoff_properties(const CutoffFamily& family);

// max |φ_R(fft) − φ_R(table)| with φ_R from the zero-padded FFT convolution of χ_R²
// with itself (and likewise for φ_{p,R}, φ_{q,R}).
struct FftCrossCheck {
  double phi, phi_p, phi_q;
  double angular_spread;  // spread of fft φ_R over grid points sharing a radius
};
FftCrossCheck fft_cross_check(const CutoffFamily& family);

std::string cutoff_csv_header();
std::string to_csv_row(const CutoffProperty& p);

}  // namespace nls
