#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nls/core/params.hpp"

namespace nls {

// Strichartz exponents of the two power families and the interpolation exponents used
// in the small-data and scattering-criterion arguments.
struct StrichartzExponentTable {
  double p = 0, q = 0;
  double a1, b1, m1, n1, r1, sigma1;
  double a2, b2, m2, n2, r2, sigma2;
  // ‖u‖_{L^{m2}L^{b2}} ≤ ‖u‖^θ_{L^{m1}L^{b1}} ‖u‖^{1−θ}_{L^ρ L^γ}
  double theta_34, rho_34, gamma_34;
  // ‖u‖_{L^{q n1'}L^{q b1'}} ≤ ‖u‖^θ_{L^{m1}L^{b1}} ‖u‖^{1−θ}_{L^ρ L^γ}
  double theta_35, rho_35, gamma_35;

  std::vector<std::pair<std::string, double>> residuals;  // identity name, |lhs − rhs|
  double max_residual() const;
  // θ ∈ (0,1) and γ ∈ [2,6] for both interpolations
  bool interpolation_in_range() const;
};

// Closed forms for any 1 < q ≤ p < 5 (no regime check; used for degenerate probes).
StrichartzExponentTable exponent_table(double p, double q);
// Requires the scattering regime.
StrichartzExponentTable strichartz_table(const PhysParams& params);

std::string exponent_csv_header();
std::vector<std::string> to_csv_rows(const StrichartzExponentTable& t);

}  // namespace nls
