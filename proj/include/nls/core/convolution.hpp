#pragma once

#include <functional>
#include <span>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls {

using KernelFunction = std::function<double(const Vec3&)>;

struct ConvolutionResult {
  RField values;
  // Set when the kernel is still larger than the tolerance on the face of its
  // sampled region (relative to its maximum), i.e. the truncation is visible.
  bool kernel_boundary_warning = false;
  double kernel_boundary_max = 0.0;
};

// Kernel spectrum on the doubled box. Build once, reuse for many convolutions.
class ConvolutionKernel {
 public:
  // Sampled at every displacement (d_x, d_y, d_z)·h, d in [-n, n): the linear
  // convolution restricted to the box is then exact, with no wrap-around.
  ConvolutionKernel(const CartesianGrid& g, const KernelFunction& k, double boundary_tol = 1e-10);
  // Kernel given as a field on the grid itself, centered at the origin; zero outside.
  static ConvolutionKernel from_field(const CartesianGrid& g, std::span<const double> k,
                                      double boundary_tol = 1e-10);

  const CartesianGrid& grid() const { return grid_; }
  bool boundary_warning() const { return warning_; }
  double boundary_max() const { return boundary_max_; }
  const CField& spectrum() const { return spectrum_; }

 private:
  explicit ConvolutionKernel(const CartesianGrid& g);
  void finish(const RField& padded, double boundary_tol, double interior_max, double face_max);

  CartesianGrid grid_;
  CField spectrum_;
  bool warning_ = false;
  double boundary_max_ = 0.0;
};

// (f ⋆ k)(x_i) = h³ Σ_j f_j k(x_i - x_j) on the original box.
ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f,
                               const ConvolutionKernel& k);
ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f,
                               std::span<const double> kernel, double boundary_tol = 1e-10);
ConvolutionResult fft_convolve(const CartesianGrid& g, std::span<const double> f,
                               const KernelFunction& kernel, double boundary_tol = 1e-10);

// Circular convolution on the periodic box with the kernel sampled at minimum-image
// displacements. Used when every translate z of a compact weight is wanted at once.
class PeriodicKernel {
 public:
  PeriodicKernel(const CartesianGrid& g, const KernelFunction& k);
  const CartesianGrid& grid() const { return grid_; }
  const CField& spectrum() const { return spectrum_; }

 private:
  CartesianGrid grid_;
  CField spectrum_;
};

RField periodic_convolve(const CartesianGrid& g, std::span<const double> f, const PeriodicKernel& k);

}  // namespace nls
