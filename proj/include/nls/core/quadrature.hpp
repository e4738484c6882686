#pragma once

#include <span>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls {

// Cartesian: h³ Σ f. Radial: 4π Σ r_j² f_j dr with a half weight on the last node.
double integrate(const Grid& g, std::span<const double> f);
cplx integrate(const Grid& g, std::span<const cplx> f);
double integrate(const CartesianGrid& g, std::span<const double> f);
double integrate(const RadialGrid& g, std::span<const double> f);

// Quadrature weights of the radial rule (including 4π r² dr).
RField radial_weights(const RadialGrid& g);

}  // namespace nls
