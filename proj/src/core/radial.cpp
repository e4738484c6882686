#include "nls/core/radial.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "nls/core/error.hpp"
#include "nls/core/fft.hpp"

namespace nls::radial {

double origin_value(std::span<const double> f) { return (15.0 * f[0] - 6.0 * f[1] + f[2]) / 10.0; }

namespace {

// Express the virtual node v (v = 1..m real nodes, v <= 0 ghosts) as nodal weights.
void add_virtual(std::map<int, double>& row, int v, double c) {
  if (v >= 1) {
    row[v - 1] += c;
  } else if (v == 0) {
    row[0] += 1.5 * c;
    row[1] += -0.6 * c;
    row[2] += 0.1 * c;
  } else {
    row[-v - 1] += c;
  }
}

FdOperator::Row pack(const std::map<int, double>& row) {
  FdOperator::Row out{};
  out.first = row.begin()->first;
  out.width = row.rbegin()->first - out.first + 1;
  if (out.width > 6) fail(ErrorKind::Domain, "finite-difference stencil wider than band");
  out.coeff.fill(0.0);
  for (auto [col, c] : row) out.coeff[col - out.first] = c;
  return out;
}

}  // namespace

FdOperator::FdOperator(const RadialGrid& g, Order order) {
  const int m = g.m();
  const double h = g.spacing();
  const double s1 = 1.0 / (12.0 * h), s2 = 1.0 / (12.0 * h * h);
  static constexpr double c1[5] = {1, -8, 0, 8, -1};
  static constexpr double c2[5] = {-1, 16, -30, 16, -1};
  static constexpr double e1m[5] = {25, -48, 36, -16, 3};         // at r_m, nodes m, m-1, ...
  static constexpr double e1m1[5] = {3, 10, -18, 6, -1};          // at r_{m-1}, nodes m, m-1, ...
  static constexpr double e2m[6] = {45, -154, 214, -156, 61, -10};
  static constexpr double e2m1[6] = {10, -15, -4, 14, -6, 1};
  rows_.reserve(m);
  for (int a = 1; a <= m; ++a) {
    std::map<int, double> row;
    if (a + 2 <= m) {
      for (int k = 0; k < 5; ++k) {
        const double c = order == Order::First ? c1[k] * s1 : c2[k] * s2;
        if (c != 0.0) add_virtual(row, a - 2 + k, c);
      }
    } else {
      const bool last = (a == m);
      if (order == Order::First) {
        const double* e = last ? e1m : e1m1;
        for (int k = 0; k < 5; ++k) add_virtual(row, m - k, e[k] * s1);
      } else {
        const double* e = last ? e2m : e2m1;
        for (int k = 0; k < 6; ++k) add_virtual(row, m - k, e[k] * s2);
      }
    }
    rows_.push_back(pack(row));
  }
}

void FdOperator::apply(std::span<const double> f, std::span<double> out) const {
  if (f.size() != rows_.size() || out.size() != rows_.size())
    fail(ErrorKind::Dimension, "radial operator: size mismatch");
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    const Row& r = rows_[j];
    double acc = 0;
    for (int k = 0; k < r.width; ++k) acc += r.coeff[k] * f[r.first + k];
    out[j] = acc;
  }
}

RField FdOperator::apply(std::span<const double> f) const {
  RField out(f.size());
  apply(f, out);
  return out;
}

void FdOperator::apply_transpose(std::span<const double> y, std::span<double> out) const {
  if (y.size() != rows_.size() || out.size() != rows_.size())
    fail(ErrorKind::Dimension, "radial operator: size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    const Row& r = rows_[j];
    for (int k = 0; k < r.width; ++k) out[r.first + k] += r.coeff[k] * y[j];
  }
}

RField derivative(const RadialGrid& g, std::span<const double> f) {
  return FdOperator(g, FdOperator::Order::First).apply(f);
}

RField second_derivative(const RadialGrid& g, std::span<const double> f) {
  return FdOperator(g, FdOperator::Order::Second).apply(f);
}

RField laplacian(const RadialGrid& g, std::span<const double> f) {
  RField d1 = derivative(g, f);
  RField d2 = second_derivative(g, f);
  for (std::size_t j = 0; j < d2.size(); ++j) d2[j] += 2.0 * d1[j] / g.r(j);
  return d2;
}

struct EvenSpline::Impl {
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
};

EvenSpline::EvenSpline(const RadialGrid& g, std::span<const double> f) : impl_(nullptr), r_max_(g.r_max()) {
  if (f.size() != g.size()) fail(ErrorKind::Dimension, "spline: size mismatch");
  constexpr int kMirror = 8;
  std::vector<double> data;
  data.reserve(f.size() + kMirror + 1);
  for (int k = kMirror; k >= 1; --k) data.push_back(f[k - 1]);
  data.push_back(origin_value(f));
  data.insert(data.end(), f.begin(), f.end());
  const double h = g.spacing();
  impl_ = new Impl{boost::math::interpolators::cardinal_cubic_b_spline<double>(
      data.data(), data.size(), -kMirror * h, h)};
}

EvenSpline::~EvenSpline() { delete impl_; }
EvenSpline::EvenSpline(EvenSpline&& o) noexcept : impl_(o.impl_), r_max_(o.r_max_) { o.impl_ = nullptr; }
EvenSpline& EvenSpline::operator=(EvenSpline&& o) noexcept {
  std::swap(impl_, o.impl_);
  r_max_ = o.r_max_;
  return *this;
}

double EvenSpline::operator()(double r) const {
  r = std::abs(r);
  if (r > r_max_) return 0.0;
  return impl_->spline(r);
}

double sine_wavenumber(const RadialGrid& g, std::size_t k) {
  return std::numbers::pi * double(k + 1) / (double(g.m() + 1) * g.spacing());
}

double sine_kinetic(const RadialGrid& g, std::span<const cplx> u) {
  if (u.size() != g.size()) fail(ErrorKind::Dimension, "sine kinetic: size mismatch");
  const int m = g.m();
  RField re(m), im(m), yr(m), yi(m);
  for (int j = 0; j < m; ++j) {
    re[j] = g.r(j) * u[j].real();
    im[j] = g.r(j) * u[j].imag();
  }
  fft::dst1(m, re.data(), yr.data());
  fft::dst1(m, im.data(), yi.data());
  double acc = 0;
  for (int k = 0; k < m; ++k) {
    const double kk = sine_wavenumber(g, k);
    acc += kk * kk * (yr[k] * yr[k] + yi[k] * yi[k]);
  }
  return 4.0 * std::numbers::pi * g.spacing() * acc / (2.0 * (m + 1));
}

}  // namespace nls::radial
