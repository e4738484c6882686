#include "nls/evolution/stepper.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/core/fft.hpp"
#include "nls/core/radial.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

SplitStepper::SplitStepper(const Grid& grid, const PhysParams& params)
    : grid_(grid), params_(params) {
  if (const auto* g = std::get_if<CartesianGrid>(&grid_)) {
    const int n = g->n();
    const auto& k = g->wavenumbers();
    k2_.resize(g->size());
    std::size_t idx = 0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix, ++idx) {
          k2_[idx] = k[ix] * k[ix] + k[iy] * k[iy] + k[iz] * k[iz];
        }
  } else {
    const auto& rg = std::get<RadialGrid>(grid_);
    k2_.resize(rg.size());
    for (std::size_t j = 0; j < rg.size(); ++j) {
      const double kk = radial::sine_wavenumber(rg, j);
      k2_[j] = kk * kk;
    }
  }
}

const CField& SplitStepper::phases(double tau) const {
  if (tau != phase_tau_ || phase_.size() != k2_.size()) {
    const double scale = std::holds_alternative<CartesianGrid>(grid_)
                             ? 1.0 / double(k2_.size())
                             : 1.0 / (2.0 * (double(k2_.size()) + 1.0));
    phase_.resize(k2_.size());
    for (std::size_t i = 0; i < k2_.size(); ++i) phase_[i] = std::polar(scale, -k2_[i] * tau);
    phase_tau_ = tau;
  }
  return phase_;
}

double SplitStepper::kinetic(CField& u, double tau) const {
  if (u.size() != k2_.size()) fail(ErrorKind::Dimension, "split step: field does not match grid");
  const CField& ph = phases(tau);
  if (const auto* g = std::get_if<CartesianGrid>(&grid_)) {
    const int n = g->n();
    const double inv = 1.0 / double(u.size());
    fft::forward(n, u.data(), u.data());
    double acc = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      acc += k2_[i] * std::norm(u[i]);
      u[i] *= ph[i];
    }
    fft::backward(n, u.data(), u.data());
    return acc * g->cell_volume() * inv;
  }
  const auto& g = std::get<RadialGrid>(grid_);
  const int m = g.m();
  RField re(m), im(m), yr(m), yi(m);
  for (int j = 0; j < m; ++j) {
    re[j] = g.r(j) * u[j].real();
    im[j] = g.r(j) * u[j].imag();
  }
  fft::dst1(m, re.data(), yr.data());
  fft::dst1(m, im.data(), yi.data());
  const double scale = 1.0 / (2.0 * (m + 1));
  double acc = 0;
  for (int k = 0; k < m; ++k) {
    acc += k2_[k] * (yr[k] * yr[k] + yi[k] * yi[k]);
    const cplx y = cplx(yr[k], yi[k]) * ph[k];
    yr[k] = y.real();
    yi[k] = y.imag();
  }
  fft::dst1(m, yr.data(), re.data());
  fft::dst1(m, yi.data(), im.data());
  for (int j = 0; j < m; ++j) u[j] = cplx(re[j], im[j]) / g.r(j);
  return 4.0 * std::numbers::pi * g.spacing() * acc * scale;
}

namespace {

// |u|^s from |u|, with exact products for integer and half-integer s
struct Power {
  double s;
  int whole = -1;
  bool half = false;
  explicit Power(double e) : s(e) {
    const double twice = 2.0 * e;
    if (twice == std::round(twice) && twice >= 0 && twice <= 16) {
      whole = int(twice) / 2;
      half = int(twice) % 2 == 1;
    }
  }
  double operator()(double a) const {
    if (whole < 0) return a > 0 ? std::pow(a, s) : 0.0;
    double r = half ? std::sqrt(a) : 1.0;
    for (int i = 0; i < whole; ++i) r *= a;
    return r;
  }
};

}  // namespace

double SplitStepper::nonlinear(CField& u, double tau) const {
  const Power pq(params_.q - 1.0), pp(params_.p - 1.0);
  double mx = 0;
  for (auto& z : u) {
    const double a = std::sqrt(std::norm(z));
    mx = std::max(mx, a);
    z *= std::polar(1.0, -tau * (pq(a) - pp(a)));
  }
  return mx;
}

SplitStepper::StepInfo SplitStepper::step(CField& u, double dt) const {
  kinetic(u, 0.5 * dt);
  nonlinear(u, dt);
  const double kin = kinetic(u, 0.5 * dt);
  double mx = 0;
  bool finite = std::isfinite(kin);
  for (const auto& z : u) {
    const double a2 = std::norm(z);
    if (!std::isfinite(a2)) finite = false;
    mx = std::max(mx, a2);
  }
  return {kin, std::sqrt(mx), finite};
}

double SplitStepper::spectral_tail(const CField& u) const {
  double total = 0, tail = 0;
  if (const auto* g = std::get_if<CartesianGrid>(&grid_)) {
    const int n = g->n();
    CField uh(u.size());
    fft::forward(n, u.data(), uh.data());
    const int cut = n / 3;  // |index| beyond (2/3)·(n/2)
    std::size_t idx = 0;
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix, ++idx) {
          auto off = [&](int i) { return std::min(i, n - i); };
          const double w = std::norm(uh[idx]);
          total += w;
          if (std::max({off(ix), off(iy), off(iz)}) > cut) tail += w;
        }
  } else {
    const auto& rg = std::get<RadialGrid>(grid_);
    const int m = rg.m();
    RField re(m), im(m), yr(m), yi(m);
    for (int j = 0; j < m; ++j) {
      re[j] = rg.r(j) * u[j].real();
      im[j] = rg.r(j) * u[j].imag();
    }
    fft::dst1(m, re.data(), yr.data());
    fft::dst1(m, im.data(), yi.data());
    for (int k = 0; k < m; ++k) {
      const double w = yr[k] * yr[k] + yi[k] * yi[k];
      total += w;
      if (3 * k >= 2 * m) tail += w;
    }
  }
  return total > 0 ? tail / total : 0.0;
}

FieldState strang_step(const FieldState& state, double dt, const PhysParams& params) {
  if (!(std::isfinite(dt) && dt != 0.0)) fail(ErrorKind::Domain, "strang_step: dt must be finite and nonzero");
  SplitStepper st(state.grid, params);
  FieldState out(state.grid, state.values, state.time + dt);
  if (!st.step(out.values, dt).finite) {
    std::ostringstream os;
    os << "strang_step produced non-finite values; last good time " << state.time;
    fail(ErrorKind::Diverged, os.str());
  }
  return out;
}

FieldState free_evolve(const FieldState& state, double t) {
  FieldState out(state.grid, state.values, state.time);
  if (t == 0.0) return out;
  SplitStepper st(state.grid, PhysParams{});
  st.kinetic(out.values, t);
  return out;
}

}  // namespace nls
