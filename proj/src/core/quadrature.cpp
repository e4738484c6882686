#include "nls/core/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nls/core/error.hpp"

namespace nls {

namespace {

void check_size(std::size_t have, std::size_t want) {
  if (have != want)
    fail(ErrorKind::Dimension,
         "samples (" + std::to_string(have) + ") do not conform to grid (" + std::to_string(want) + ")");
}

// Neumaier compensated sum: conservation checks compare integrals at the 1e-14 level,
// below the rounding of a plain sum over 10⁵–10⁷ terms.
struct Compensated {
  double sum = 0, c = 0;
  void add(double x) {
    const double t = sum + x;
    c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + c; }
};

template <class T>
struct Accumulator;
template <>
struct Accumulator<double> {
  Compensated a;
  void add(double x) { a.add(x); }
  double value() const { return a.value(); }
};
template <>
struct Accumulator<cplx> {
  Compensated re, im;
  void add(const cplx& x) {
    re.add(x.real());
    im.add(x.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

template <class T>
T radial_sum(const RadialGrid& g, std::span<const T> f) {
  check_size(f.size(), g.size());
  Accumulator<T> acc;
  const std::size_t m = g.size();
  for (std::size_t j = 0; j + 1 < m; ++j) acc.add(g.r(j) * g.r(j) * f[j]);
  acc.add(0.5 * g.r(m - 1) * g.r(m - 1) * f[m - 1]);
  return 4.0 * std::numbers::pi * g.spacing() * acc.value();
}

template <class T>
T cartesian_sum(const CartesianGrid& g, std::span<const T> f) {
  check_size(f.size(), g.size());
  Accumulator<T> acc;
  for (const T& x : f) acc.add(x);
  return g.cell_volume() * acc.value();
}

}  // namespace

double integrate(const CartesianGrid& g, std::span<const double> f) { return cartesian_sum(g, f); }
double integrate(const RadialGrid& g, std::span<const double> f) { return radial_sum(g, f); }

double integrate(const Grid& g, std::span<const double> f) {
  return std::visit([&](const auto& x) { return integrate(x, f); }, g);
}

cplx integrate(const Grid& g, std::span<const cplx> f) {
  if (auto* c = std::get_if<CartesianGrid>(&g)) return cartesian_sum(*c, f);
  return radial_sum(std::get<RadialGrid>(g), f);
}

RField radial_weights(const RadialGrid& g) {
  RField w(g.size());
  const double c = 4.0 * std::numbers::pi * g.spacing();
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = c * g.r(j) * g.r(j);
  w.back() *= 0.5;
  return w;
}

}  // namespace nls
