#pragma once

#include <array>
#include <span>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls::radial {

// Value at r = 0 of an even profile from its first three nodes (exact through r⁴).
double origin_value(std::span<const double> f);

// Sparse fourth-order finite-difference operator on the nodes r_1..r_m for even
// profiles: ghost values come from f(-r) = f(r) and the origin extrapolation; the
// last two rows use one-sided stencils.
class FdOperator {
 public:
  enum class Order { First, Second };
  FdOperator(const RadialGrid& g, Order order);

  RField apply(std::span<const double> f) const;
  void apply(std::span<const double> f, std::span<double> out) const;
  void apply_transpose(std::span<const double> y, std::span<double> out) const;

  struct Row {
    int first;                    // column of coefficient 0
    std::array<double, 6> coeff;  // contiguous band starting at `first`
    int width;
  };
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<Row> rows_;
};

// d/dr and d²/dr² of an even profile.
RField derivative(const RadialGrid& g, std::span<const double> f);
RField second_derivative(const RadialGrid& g, std::span<const double> f);
// f'' + (2/r) f'
RField laplacian(const RadialGrid& g, std::span<const double> f);

// Cubic B-spline through the even extension of the nodal data; zero beyond r_max.
class EvenSpline {
 public:
  EvenSpline(const RadialGrid& g, std::span<const double> f);
  ~EvenSpline();
  EvenSpline(EvenSpline&&) noexcept;
  EvenSpline& operator=(EvenSpline&&) noexcept;

  double operator()(double r) const;
  double r_max() const { return r_max_; }

 private:
  struct Impl;
  Impl* impl_;
  double r_max_;
};

// Sine (DST-I) modes of v = r·u on r_1..r_m with v vanishing at 0 and r_{m+1}.
double sine_wavenumber(const RadialGrid& g, std::size_t k);
// ∫|∇u|² evaluated spectrally in the sine basis; the propagator in evolution uses the same modes.
double sine_kinetic(const RadialGrid& g, std::span<const cplx> u);

}  // namespace nls::radial
