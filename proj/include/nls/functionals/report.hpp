#pragma once

#include <string>

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"

namespace nls {

// How ∫|∇u|² is evaluated on radial grids. Finite differences match the variational
// discretization; the sine basis matches the radial propagator.
enum class RadialKinetic { FiniteDifference, Sine };

struct Primitives {
  double mass = 0;
  double kinetic = 0;
  double lq = 0;
  double lp = 0;
  Vec3 momentum{0, 0, 0};  // Im ∫ ū ∇u
};

struct FunctionalReport {
  double time = 0;
  double mass = 0;
  double kinetic = 0;
  double lq = 0;
  double lp = 0;
  Vec3 momentum{0, 0, 0};
  double energy = 0;
  double action = 0;
  double pohozaev = 0;
  double i_omega = 0;

  static FunctionalReport derive(const Primitives& prim, const PhysParams& params, double time);
};

// (|u|²)^{s/2}, computed through the logarithm and with 0 mapped to 0.
inline double abs_pow(double abs2, double s);

Primitives primitives(const FieldState& s, double p, double q, RadialKinetic rk = RadialKinetic::FiniteDifference);
FunctionalReport report(const FieldState& s, const PhysParams& params,
                        RadialKinetic rk = RadialKinetic::FiniteDifference);

double kinetic(const FieldState& s, RadialKinetic rk = RadialKinetic::FiniteDifference);
double mass(const FieldState& s);
// ∫|u|^r
double power_integral(const FieldState& s, double r);
// (∫|u|^r)^{1/r}; r < 1 is a domain error.
double lebesgue_norm(const FieldState& s, double r);

std::string report_csv_header();
std::string to_csv_row(const FunctionalReport& r);

}  // namespace nls

#include <cmath>

inline double nls::abs_pow(double abs2, double s) {
  return abs2 > 0 ? std::exp(0.5 * s * std::log(abs2)) : 0.0;
}
