#pragma once

#include <array>

#include "nls/core/field.hpp"

namespace nls::spectral {

CField forward(const CartesianGrid& g, const CField& u);
// Normalized inverse: backward(forward(u)) == u.
CField backward(const CartesianGrid& g, const CField& uhat);

// ∂_j u via i k_j û with the Nyquist mode zeroed. Radial states are rejected:
// use the radial derivative operator instead.
std::array<CField, 3> gradient(const FieldState& s);
std::array<CField, 3> gradient(const CartesianGrid& g, const CField& u);
CField derivative(const CartesianGrid& g, const CField& u, int axis);
CField laplacian(const CartesianGrid& g, const CField& u);

std::array<RField, 3> gradient(const CartesianGrid& g, const RField& f);
RField laplacian(const CartesianGrid& g, const RField& f);

// Same quantities evaluated in wavenumber space.
double mass_fourier(const CartesianGrid& g, const CField& u);
double kinetic_fourier(const CartesianGrid& g, const CField& u);

}  // namespace nls::spectral
