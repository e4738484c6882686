#include "nls/core/spectral.hpp"

#include "nls/core/error.hpp"
#include "nls/core/fft.hpp"

namespace nls::spectral {

namespace {

template <class F>
void for_each_mode(const CartesianGrid& g, F&& f) {
  const int n = g.n();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx) f(idx, ix, iy, iz);
}

double axis_k(const CartesianGrid& g, int axis, int ix, int iy, int iz) {
  const int i = axis == 0 ? ix : axis == 1 ? iy : iz;
  return g.derivative_wavenumber(i);
}

}  // namespace

CField forward(const CartesianGrid& g, const CField& u) {
  if (u.size() != g.size()) fail(ErrorKind::Dimension, "spectral forward: size mismatch");
  CField out(u.size());
  fft::forward(g.n(), u.data(), out.data());
  return out;
}

CField backward(const CartesianGrid& g, const CField& uhat) {
  if (uhat.size() != g.size()) fail(ErrorKind::Dimension, "spectral backward: size mismatch");
  CField out(uhat.size());
  fft::backward(g.n(), uhat.data(), out.data());
  const double s = 1.0 / double(g.size());
  for (auto& z : out) z *= s;
  return out;
}

std::array<CField, 3> gradient(const FieldState& s) {
  if (!s.is_cartesian())
    fail(ErrorKind::Dimension, "spectral gradient needs a Cartesian grid; use the radial derivative operator");
  return gradient(s.cartesian(), s.values);
}

std::array<CField, 3> gradient(const CartesianGrid& g, const CField& u) {
  const CField uhat = forward(g, u);
  std::array<CField, 3> out;
  CField tmp(u.size());
  for (int a = 0; a < 3; ++a) {
    for_each_mode(g, [&](std::size_t i, int ix, int iy, int iz) {
      tmp[i] = cplx(0.0, axis_k(g, a, ix, iy, iz)) * uhat[i];
    });
    out[a] = backward(g, tmp);
  }
  return out;
}

CField derivative(const CartesianGrid& g, const CField& u, int axis) {
  CField uhat = forward(g, u);
  for_each_mode(g, [&](std::size_t i, int ix, int iy, int iz) {
    uhat[i] *= cplx(0.0, axis_k(g, axis, ix, iy, iz));
  });
  return backward(g, uhat);
}

CField laplacian(const CartesianGrid& g, const CField& u) {
  CField uhat = forward(g, u);
  for_each_mode(g, [&](std::size_t i, int ix, int iy, int iz) {
    const double kx = g.wavenumber(ix), ky = g.wavenumber(iy), kz = g.wavenumber(iz);
    uhat[i] *= -(kx * kx + ky * ky + kz * kz);
  });
  return backward(g, uhat);
}

namespace {
CField to_complex(const RField& f) {
  CField c(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) c[i] = f[i];
  return c;
}
RField real_part(const CField& c) {
  RField f(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f[i] = c[i].real();
  return f;
}
}  // namespace

std::array<RField, 3> gradient(const CartesianGrid& g, const RField& f) {
  auto c = gradient(g, to_complex(f));
  return {real_part(c[0]), real_part(c[1]), real_part(c[2])};
}

RField laplacian(const CartesianGrid& g, const RField& f) { return real_part(laplacian(g, to_complex(f))); }

double mass_fourier(const CartesianGrid& g, const CField& u) {
  const CField uhat = forward(g, u);
  double acc = 0;
  for (const auto& z : uhat) acc += std::norm(z);
  return acc * g.cell_volume() / double(g.size());
}

double kinetic_fourier(const CartesianGrid& g, const CField& u) {
  const CField uhat = forward(g, u);
  double acc = 0;
  for_each_mode(g, [&](std::size_t i, int ix, int iy, int iz) {
    const double kx = g.derivative_wavenumber(ix), ky = g.derivative_wavenumber(iy),
                 kz = g.derivative_wavenumber(iz);
    acc += (kx * kx + ky * ky + kz * kz) * std::norm(uhat[i]);
  });
  return acc * g.cell_volume() / double(g.size());
}

}  // namespace nls::spectral
