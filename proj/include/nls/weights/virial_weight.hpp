#pragma once

#include <array>
#include <string>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls {

enum class VirialKind { Quadratic, RadialRho, CylindricalRho };

const char* to_string(VirialKind k);
VirialKind parse_virial_kind(const std::string& s);

// ϑ(s) = ∫₀^s∫₀^σ θ with θ = 2 on [0,1], 0 on [2,∞) joined by the bump bridge.
// Returns ϑ, ϑ′, θ, θ′, θ″.
struct VarthetaValue {
  double v, d1, d2, d3, d4;
};
VarthetaValue vartheta(double s);

// Radial profile of a weight and the combinations the virial formulas need, as functions
// of r = |x| (Quadratic, RadialRho) or of r = |(x₁,x₂)| (CylindricalRho, which adds x₃²).
struct WeightProfile {
  double phi, d1, d2;  // φ, ∂_rφ, ∂²_rφ
  double laplacian, bilaplacian;
};
WeightProfile weight_profile(VirialKind kind, double rho, double r);

struct VirialWeight {
  VirialKind kind = VirialKind::Quadratic;
  double rho = 0.0;
  Grid grid;

  // Cartesian: grad has three components and hessian six (xx, xy, xz, yy, yz, zz).
  // Radial: grad[0] = ∂_rφ and hessian[0] = ∂²_rφ, the only pieces a radial field sees.
  RField phi;
  std::array<RField, 3> grad;
  std::array<RField, 6> hessian;
  RField laplacian, bilaplacian;

  explicit VirialWeight(Grid g) : grid(std::move(g)) {}
  bool is_radial() const { return std::holds_alternative<RadialGrid>(grid); }
};

// Derivatives come from the chain rule on the analytic ϑ: the localized weights grow
// linearly at large |x| and are not periodic, so no spectral differentiation is applied.
VirialWeight build_virial_weight(VirialKind kind, double rho, const Grid& grid);

}  // namespace nls
