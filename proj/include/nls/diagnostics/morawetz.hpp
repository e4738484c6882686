#pragma once

#include <array>
#include <memory>
#include <vector>

#include "nls/evolution/trajectory.hpp"
#include "nls/weights/cutoff.hpp"

namespace nls {

struct MorawetzOptions {
  // Flips the sign of term-4; a deliberate fault for checking that the identity check bites.
  bool flip_term4_sign = false;
};

// Right-hand side of dM/dt, with ρ = |u|², J = Im(ū∇u), T_jk = Re(∂_ju ∂_kū), K_k(w) = ψ_R(|w|)w_k:
//   term-1 = −4 Σ_k ∫((∇·J)⋆K_k) J_k
//   term-2 = −4 Σ_j ∫(ρ⋆K_j) Σ_k ∂_kT_jk
//   term-3 = ∫(ρ⋆K)·∇Δρ
//   term-4 = (2(p−1)/(p+1)) ∫(ρ⋆K)·∇|u|^{p+1}
//   term-5 = −(2(q−1)/(q+1)) ∫(ρ⋆K)·∇|u|^{q+1}
struct MorawetzTerms {
  std::array<double, 5> term{0, 0, 0, 0, 0};
  double sum() const { return term[0] + term[1] + term[2] + term[3] + term[4]; }
};

// Kernels are sampled on the doubled box once, so the convolutions are exact linear ones.
class MorawetzEvaluator {
 public:
  MorawetzEvaluator(const CartesianGrid& g, const CutoffFamily& family);
  ~MorawetzEvaluator();
  MorawetzEvaluator(MorawetzEvaluator&&) noexcept;

  // M = 2∬|u(y)|² ψ_R(x−y)(x−y)·J(x) dx dy
  double action(const FieldState& s) const;
  MorawetzTerms terms(const FieldState& s, const PhysParams& params, const MorawetzOptions& opt = {}) const;
  double radius() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double morawetz_action(const FieldState& s, const CutoffFamily& family);
MorawetzTerms morawetz_derivative_terms(const FieldState& s, const CutoffFamily& family,
                                        const PhysParams& params, const MorawetzOptions& opt = {});

// O(N²) double sums over grid-point pairs with the same pointwise fields; an oracle for
// small grids only.
struct MorawetzDirect {
  double action = 0;
  MorawetzTerms terms;
};
MorawetzDirect morawetz_direct(const FieldState& s, const CutoffFamily& family, const PhysParams& params);

struct MorawetzSample {
  double t = 0;
  double radius = 0;
  double m_value = 0;
  double m_dot_fd = 0;  // centered difference of neighbouring samples; 0 at the ends
  MorawetzTerms terms;
  double identity_residual = 0;  // |m_dot_fd − Σterms| / max(|m_dot_fd|, |Σterms|)
  bool interior = false;
  bool tainted = false;
};

struct MorawetzSeries {
  std::vector<MorawetzSample> samples;
  double bound_constant = 0;  // C_A = max |M|/R
  double max_identity_residual = 0;
};
MorawetzSeries morawetz_series(const std::vector<FieldState>& states, const CutoffFamily& family,
                               const PhysParams& params, const MorawetzOptions& opt = {},
                               double taint_time = -1);
MorawetzSeries morawetz_series(const Trajectory& traj, const CutoffFamily& family,
                               const MorawetzOptions& opt = {});

}  // namespace nls
