#pragma once

#include <string>
#include <string_view>

namespace nls {

enum class Regime { Scattering, Blowup, General };

const char* to_string(Regime r);
Regime parse_regime(std::string_view s);

// Equation i u_t + Δu = |u|^{q-1}u - |u|^{p-1}u with frequency omega for the action.
struct PhysParams {
  double p = 3.0;
  double q = 2.5;
  double omega = 1.0;
  Regime regime = Regime::Scattering;

  // Throws Regime/Domain errors when the exponents leave the regime's window.
  static PhysParams make(double p, double q, double omega, Regime regime);
  // Most specific regime the exponents satisfy.
  static PhysParams infer(double p, double q, double omega);

  void validate() const;

  // Coefficients of lp and lq inside the Pohozaev functional.
  double cp() const { return 3.0 * (p - 1.0) / (2.0 * (p + 1.0)); }
  double cq() const { return 3.0 * (q - 1.0) / (2.0 * (q + 1.0)); }

  std::string describe() const;
};

}  // namespace nls
