#include "nls/functionals/report.hpp"

#include <cstdio>

#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"
#include "nls/core/spectral.hpp"

namespace nls {

namespace {

double radial_fd_kinetic(const RadialGrid& g, const CField& u) {
  const std::size_t m = g.size();
  RField re(m), im(m);
  for (std::size_t j = 0; j < m; ++j) {
    re[j] = u[j].real();
    im[j] = u[j].imag();
  }
  radial::FdOperator D(g, radial::FdOperator::Order::First);
  RField dre = D.apply(re), dim = D.apply(im);
  for (std::size_t j = 0; j < m; ++j) dre[j] = dre[j] * dre[j] + dim[j] * dim[j];
  return integrate(g, dre);
}

}  // namespace

FunctionalReport FunctionalReport::derive(const Primitives& prim, const PhysParams& params, double time) {
  const double p = params.p, q = params.q;
  FunctionalReport r;
  r.time = time;
  r.mass = prim.mass;
  r.kinetic = prim.kinetic;
  r.lq = prim.lq;
  r.lp = prim.lp;
  r.momentum = prim.momentum;
  r.energy = 0.5 * r.kinetic + r.lq / (q + 1) - r.lp / (p + 1);
  r.action = r.energy + 0.5 * params.omega * r.mass;
  r.pohozaev = r.kinetic + params.cq() * r.lq - params.cp() * r.lp;
  r.i_omega = r.action - (2.0 / (3.0 * (q - 1))) * r.pohozaev;
  return r;
}

Primitives primitives(const FieldState& s, double p, double q, RadialKinetic rk) {
  s.check_finite();
  Primitives out;
  const std::size_t n = s.size();
  RField dm(n), dq(n), dp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = std::norm(s.values[i]);
    dm[i] = a2;
    dq[i] = abs_pow(a2, q + 1);
    dp[i] = abs_pow(a2, p + 1);
  }
  out.mass = integrate(s.grid, dm);
  out.lq = integrate(s.grid, dq);
  out.lp = integrate(s.grid, dp);
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    auto grad = spectral::gradient(g, s.values);
    RField dk(n), j0(n), j1(n), j2(n);
    for (std::size_t i = 0; i < n; ++i) {
      dk[i] = std::norm(grad[0][i]) + std::norm(grad[1][i]) + std::norm(grad[2][i]);
      const cplx ub = std::conj(s.values[i]);
      j0[i] = (ub * grad[0][i]).imag();
      j1[i] = (ub * grad[1][i]).imag();
      j2[i] = (ub * grad[2][i]).imag();
    }
    out.kinetic = integrate(g, dk);
    out.momentum = {integrate(g, j0), integrate(g, j1), integrate(g, j2)};
  } else {
    const auto& g = s.radial();
    out.kinetic = rk == RadialKinetic::Sine ? radial::sine_kinetic(g, s.values) : radial_fd_kinetic(g, s.values);
  }
  return out;
}

FunctionalReport report(const FieldState& s, const PhysParams& params, RadialKinetic rk) {
  params.validate();
  return FunctionalReport::derive(primitives(s, params.p, params.q, rk), params, s.time);
}

double kinetic(const FieldState& s, RadialKinetic rk) {
  s.check_finite();
  if (s.is_radial())
    return rk == RadialKinetic::Sine ? radial::sine_kinetic(s.radial(), s.values) : radial_fd_kinetic(s.radial(), s.values);
  return spectral::kinetic_fourier(s.cartesian(), s.values);
}

double mass(const FieldState& s) {
  RField d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = std::norm(s.values[i]);
  return integrate(s.grid, d);
}

double power_integral(const FieldState& s, double r) {
  RField d(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) d[i] = abs_pow(std::norm(s.values[i]), r);
  return integrate(s.grid, d);
}

double lebesgue_norm(const FieldState& s, double r) {
  if (!(r >= 1) || !std::isfinite(r)) fail(ErrorKind::Domain, "Lebesgue exponent must be finite and >= 1");
  const double v = power_integral(s, r);
  return v > 0 ? std::pow(v, 1.0 / r) : 0.0;
}

std::string report_csv_header() { return "time,mass,kinetic,lq,lp,energy,action,pohozaev,i_omega"; }

std::string to_csv_row(const FunctionalReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.time, r.mass, r.kinetic,
                r.lq, r.lp, r.energy, r.action, r.pohozaev, r.i_omega);
  return buf;
}

}  // namespace nls
