#pragma once

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

enum class Membership { APlus, AMinus, Neither };
const char* to_string(Membership m);

struct ClassificationResult {
  Membership membership = Membership::Neither;
  double action_margin = 0;   // m_ω - S_ω(u)
  double pohozaev_value = 0;  // G(u)
  double confidence = 0;      // min margin over the estimated quadrature error
  double action_error = 0;
  double pohozaev_error = 0;
  FunctionalReport report;
};

// Membership from the report; the error estimate is |F_h - F_2h|/3 with F_2h taken
// on the every-other-node subgrid.
ClassificationResult classify(const FieldState& s, const PhysParams& params, double m_omega,
                              RadialKinetic rk = RadialKinetic::FiniteDifference);
// Same decision from an existing report, without the error estimate.
Membership membership_of(const FunctionalReport& r, double m_omega);

}  // namespace nls
