#pragma once

#include <string>
#include <vector>

#include "nls/evolution/trajectory.hpp"
#include "nls/variational/classify.hpp"

namespace nls {

struct InvarianceSample {
  double t = 0;
  Membership membership = Membership::Neither;
  double pohozaev = 0;
  double kinetic = 0;
  double bound = 0;  // right-hand side of the checked inequality
  double slack = 0;  // bound − lhs; ≥ 0 when the inequality holds
};

struct InvarianceReport {
  Membership expected = Membership::Neither;
  std::vector<InvarianceSample> samples;
  double action_gap = 0;       // m_ω − S_ω(u₀)
  bool membership_kept = true;
  double min_slack = 0;
  double worst_relative = 0;   // min over samples of slack / |G| (A⁻ only)
  double delta_max = 0;        // largest δ with G + δ‖∇u‖² ≤ −(3(p−1)/4)(m_ω − S_ω(u₀)) (A⁻ only)
  bool holds = false;
  std::string failure;
};

// A⁺: every sample in A⁺ and ‖∇u‖² ≤ 6(q−1)/(3q−7)·m_ω.
InvarianceReport check_aplus_invariance(const Trajectory& traj, double m_omega);
// A⁻: every sample in A⁻, G ≤ −(3(p−1)/2)(m_ω − S_ω(u₀)) with slack ≥ −relative_tol·|G|,
// and a positive δ in the strengthened bound.
InvarianceReport check_aminus_invariance(const Trajectory& traj, double m_omega, double relative_tol = 1e-3);

}  // namespace nls
