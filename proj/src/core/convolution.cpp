#include "nls/core/convolution.hpp"

#include <cmath>

#include "nls/core/error.hpp"
#include "nls/core/fft.hpp"

namespace nls {

namespace {

std::size_t pad_index(int N, int dx, int dy, int dz) {
  auto wrap = [N](int d) { return d < 0 ? d + N : d; };
  return std::size_t(wrap(dx)) + std::size_t(N) * (std::size_t(wrap(dy)) + std::size_t(N) * wrap(dz));
}

void check(const CartesianGrid& g, std::size_t have, const char* what) {
  if (have != g.size()) fail(ErrorKind::Dimension, std::string(what) + ": field does not match grid");
}

}  // namespace

ConvolutionKernel::ConvolutionKernel(const CartesianGrid& g) : grid_(g) {}

ConvolutionKernel::ConvolutionKernel(const CartesianGrid& g, const KernelFunction& k, double boundary_tol)
    : grid_(g) {
  const int n = g.n(), N = 2 * n;
  const double h = g.spacing();
  RField padded(std::size_t(N) * N * N, 0.0);
  double interior = 0, face = 0;
  for (int dz = -n; dz < n; ++dz)
    for (int dy = -n; dy < n; ++dy)
      for (int dx = -n; dx < n; ++dx) {
        const double v = k({dx * h, dy * h, dz * h});
        padded[pad_index(N, dx, dy, dz)] = v;
        interior = std::max(interior, std::abs(v));
        if (dx == -n || dy == -n || dz == -n) face = std::max(face, std::abs(v));
      }
  finish(padded, boundary_tol, interior, face);
}

ConvolutionKernel ConvolutionKernel::from_field(const CartesianGrid& g, std::span<const double> k,
                                                double boundary_tol) {
  check(g, k.size(), "kernel");
  ConvolutionKernel out(g);
  const int n = g.n(), N = 2 * n;
  RField padded(std::size_t(N) * N * N, 0.0);
  double interior = 0, face = 0;
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx) {
        const double v = k[idx];
        padded[pad_index(N, ix - n / 2, iy - n / 2, iz - n / 2)] = v;
        interior = std::max(interior, std::abs(v));
        if (ix == 0 || iy == 0 || iz == 0) face = std::max(face, std::abs(v));
      }
  out.finish(padded, boundary_tol, interior, face);
  return out;
}

void ConvolutionKernel::finish(const RField& padded, double boundary_tol, double interior_max,
                               double face_max) {
  const int N = 2 * grid_.n();
  spectrum_.assign(fft::half_size(N), cplx{});
  fft::forward_r2c(N, padded.data(), spectrum_.data());
  boundary_max_ = face_max;
  warning_ = interior_max > 0 && face_max > boundary_tol * interior_max;
}

ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f, const ConvolutionKernel& k) {
  check(g, f.size(), "fft_convolve");
  if (!(k.grid() == g)) fail(ErrorKind::Dimension, "fft_convolve: kernel built for another grid");
  const int n = g.n(), N = 2 * n;
  RField padded(std::size_t(N) * N * N, 0.0);
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx) padded[pad_index(N, ix, iy, iz)] = f[idx];
  CField spec(fft::half_size(N));
  fft::forward_r2c(N, padded.data(), spec.data());
  const auto& ks = k.spectrum();
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= ks[i];
  fft::backward_c2r(N, spec.data(), padded.data());

  ConvolutionResult out;
  out.values.resize(g.size());
  const double scale = g.cell_volume() / (double(N) * N * N);
  idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix, ++idx) out.values[idx] = scale * padded[pad_index(N, ix, iy, iz)];
  out.kernel_boundary_warning = k.boundary_warning();
  out.kernel_boundary_max = k.boundary_max();
  return out;
}

ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f, std::span<const double> kernel,
                               double boundary_tol) {
  return fft_convolve(g, f, ConvolutionKernel::from_field(g, kernel, boundary_tol));
}

ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f, const KernelFunction& kernel,
                               double boundary_tol) {
  return fft_convolve(g, f, ConvolutionKernel(g, kernel, boundary_tol));
}

PeriodicKernel::PeriodicKernel(const CartesianGrid& g, const KernelFunction& k) : grid_(g) {
  const int n = g.n();
  const double h = g.spacing();
  RField samples(g.size());
  for (int dz = -n / 2; dz < n / 2; ++dz)
    for (int dy = -n / 2; dy < n / 2; ++dy)
      for (int dx = -n / 2; dx < n / 2; ++dx) samples[pad_index(n, dx, dy, dz)] = k({dx * h, dy * h, dz * h});
  spectrum_.assign(fft::half_size(n), cplx{});
  fft::forward_r2c(n, samples.data(), spectrum_.data());
}

RField periodic_convolve(const CartesianGrid& g, std::span<const double> f, const PeriodicKernel& k) {
  check(g, f.size(), "periodic_convolve");
  if (!(k.grid() == g)) fail(ErrorKind::Dimension, "periodic_convolve: kernel built for another grid");
  const int n = g.n();
  CField spec(fft::half_size(n));
  fft::forward_r2c(n, f.data(), spec.data());
  const auto& ks = k.spectrum();
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= ks[i];
  RField out(g.size());
  fft::backward_c2r(n, spec.data(), out.data());
  const double scale = g.cell_volume() / double(g.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace nls
