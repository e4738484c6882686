#include "nls/variational/scaling.hpp"

#include <cmath>
#include <numbers>

#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"

namespace nls {

namespace {

// Row i holds the band-limited interpolation weights that evaluate a periodic
// sample vector at λ x_i; rows whose target leaves the box are zero.
std::vector<double> interpolation_matrix(const CartesianGrid& g, double lambda) {
  const int n = g.n();
  const double L = g.box_length();
  const double dk = 2.0 * std::numbers::pi / L;
  std::vector<double> W(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double y = lambda * g.coord(i);
    if (y < -0.5 * L || y >= 0.5 * L) continue;
    for (int j = 0; j < n; ++j) {
      const double s = y - g.coord(j);
      double acc = 1.0 + std::cos(0.5 * n * dk * s);
      for (int k = 1; k < n / 2; ++k) acc += 2.0 * std::cos(k * dk * s);
      W[std::size_t(i) * n + j] = acc / n;
    }
  }
  return W;
}

CField apply_axis(const CartesianGrid& g, const std::vector<double>& W, const CField& f, int axis) {
  const int n = g.n();
  CField out(f.size(), cplx{});
  std::vector<cplx> line(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      auto at = [&](int i) {
        return axis == 0 ? g.index(i, a, b) : axis == 1 ? g.index(a, i, b) : g.index(a, b, i);
      };
      for (int j = 0; j < n; ++j) line[j] = f[at(j)];
      for (int i = 0; i < n; ++i) {
        const double* w = &W[std::size_t(i) * n];
        cplx acc{};
        for (int j = 0; j < n; ++j) acc += w[j] * line[j];
        out[at(i)] = acc;
      }
    }
  return out;
}

}  // namespace

double boundary_mass_fraction(const FieldState& s) {
  double outer = 0, total = 0;
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    const double cut = 0.45 * g.box_length();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec3 x = g.position(i);
      const double a2 = std::norm(s.values[i]);
      total += a2;
      if (std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])}) > cut) outer += a2;
    }
  } else {
    const auto& g = s.radial();
    const RField w = radial_weights(g);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double a2 = w[j] * std::norm(s.values[j]);
      total += a2;
      if (g.r(j) > 0.9 * g.r_max()) outer += a2;
    }
  }
  return total > 0 ? outer / total : 0.0;
}

FieldState rescale(const FieldState& s, double lambda, double overflow_tol) {
  if (!(lambda > 0) || !std::isfinite(lambda)) fail(ErrorKind::Domain, "rescale needs lambda > 0");
  if (lambda == 1.0) return s;
  const double amp = std::pow(lambda, 1.5);
  FieldState out = s;
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    const auto W = interpolation_matrix(g, lambda);
    CField v = apply_axis(g, W, s.values, 0);
    v = apply_axis(g, W, v, 1);
    v = apply_axis(g, W, v, 2);
    for (auto& z : v) z *= amp;
    out.values = std::move(v);
  } else {
    const auto& g = s.radial();
    RField re(s.size()), im(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      re[j] = s.values[j].real();
      im[j] = s.values[j].imag();
    }
    radial::EvenSpline sr(g, re), si(g, im);
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double r = lambda * g.r(j);
      out.values[j] = amp * cplx(sr(r), si(r));
    }
  }
  const double frac = boundary_mass_fraction(out);
  if (frac > overflow_tol)
    fail(ErrorKind::Overflow, "rescaled field leaves " + std::to_string(frac) + " of its mass at the box boundary");
  return out;
}

double scaled_pohozaev(double lambda, double kinetic, double lp, double lq, const PhysParams& params) {
  const double ap = 1.5 * (params.p - 1), aq = 1.5 * (params.q - 1);
  return lambda * lambda * kinetic - params.cp() * std::pow(lambda, ap) * lp + params.cq() * std::pow(lambda, aq) * lq;
}

double scaled_action(double lambda, const Primitives& prim, const PhysParams& params) {
  const double ap = 1.5 * (params.p - 1), aq = 1.5 * (params.q - 1);
  return 0.5 * lambda * lambda * prim.kinetic + std::pow(lambda, aq) * prim.lq / (params.q + 1) -
         std::pow(lambda, ap) * prim.lp / (params.p + 1) + 0.5 * params.omega * prim.mass;
}

double scaled_i_omega(double lambda, const Primitives& prim, const PhysParams& params) {
  const double p = params.p, q = params.q;
  const double ap = 1.5 * (p - 1);
  return (3 * q - 7) / (6 * (q - 1)) * lambda * lambda * prim.kinetic +
         (p - q) / ((p + 1) * (q - 1)) * std::pow(lambda, ap) * prim.lp + 0.5 * params.omega * prim.mass;
}

double lambda0_from(double kinetic, double lp, double lq, const PhysParams& params) {
  if (!(kinetic > 0) || !(lp > 0)) fail(ErrorKind::Domain, "find_lambda0 needs a nonzero state");
  const double ap = 1.5 * (params.p - 1) - 2, aq = 1.5 * (params.q - 1) - 2;
  const double cp = params.cp() * lp, cq = params.cq() * lq;
  // f(λ) = G(φ_λ)/λ², evaluated in log λ to keep the bracket well conditioned.
  auto f = [&](double t) { return kinetic - cp * std::exp(ap * t) + cq * std::exp(aq * t); };
  double lo = 0, hi = 0;
  int guard = 0;
  while (f(hi) > 0) {
    hi += 1.0;
    if (++guard > 3000) fail(ErrorKind::Convergence, "lambda0 bracket did not close above");
  }
  while (f(lo) < 0) {
    lo -= 1.0;
    if (++guard > 6000) fail(ErrorKind::Convergence, "lambda0 bracket did not close below");
  }
  if (hi - lo > 1.0) {
    // one of the two loops moved; the other end is the last point of opposite sign
    if (hi > 0) lo = hi - 1.0;
    else hi = lo + 1.0;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0 ? lo : hi) = mid;
  }
  const double t = std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
  return std::exp(t);
}

double find_lambda0(const FieldState& s, const PhysParams& params) {
  const Primitives prim = primitives(s, params.p, params.q);
  if (!(prim.mass > 0)) fail(ErrorKind::Domain, "find_lambda0 on a zero state");
  return lambda0_from(prim.kinetic, prim.lp, prim.lq, params);
}

}  // namespace nls
