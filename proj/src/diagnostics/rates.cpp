#include "nls/diagnostics/rates.hpp"

#include <algorithm>
#include <cmath>

#include "nls/core/error.hpp"

namespace nls {

const char* to_string(RateSymmetry s) { return s == RateSymmetry::Radial ? "radial" : "cylindrical"; }

RateSymmetry parse_rate_symmetry(const std::string& s) {
  if (s == "radial") return RateSymmetry::Radial;
  if (s == "cylindrical") return RateSymmetry::Cylindrical;
  fail(ErrorKind::Usage, "unknown symmetry '" + s + "'");
}

namespace {

void check_branch(double p, RateSymmetry sym) {
  if (sym == RateSymmetry::Cylindrical && !(p < 3.0))
    fail(ErrorKind::Domain, "cylindrical blow-up rate needs p < 3");
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double predicted_rate_exponent(double p, RateSymmetry sym) {
  check_branch(p, sym);
  return sym == RateSymmetry::Radial ? 2.0 * (5 - p) / (p + 3) : 4.0 * (3 - p) / (5 - p);
}

double predicted_gradient_exponent(double p, RateSymmetry sym) {
  check_branch(p, sym);
  return sym == RateSymmetry::Radial ? 2.0 * (p - 1) / (p + 3) : (p - 1) / (5 - p);
}

RateFit rate_fit(std::span<const double> t, std::span<const double> kinetic, double p, RateSymmetry sym) {
  const std::size_t n = t.size();
  if (kinetic.size() != n) fail(ErrorKind::Dimension, "rate fit: size mismatch");
  if (n < 8) fail(ErrorKind::Degenerate, "rate fit needs at least 8 points");
  RateFit out;
  out.exponent_predicted = predicted_rate_exponent(p, sym);
  out.gradient_exponent_predicted = predicted_gradient_exponent(p, sym);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 / std::sqrt(kinetic[i]);
  std::size_t s = 0;
  for (std::size_t i = n; i-- > 0;)
    if (y[i] >= 10.0 * y.back()) {
      s = i;
      break;
    }
  if (n - s < 3) fail(ErrorKind::Degenerate, "rate fit: final decade of 1/‖∇u‖ has fewer than 3 points");
  const PowerFit pf = fit_vanishing_power(t.subspan(s), std::span<const double>(y).subspan(s));
  const double T = pf.t_star, a = pf.exponent, c = pf.coefficient;
  out.t_star = T;
  out.gradient_exponent_fitted = a;
  if (!(a < 1.0)) fail(ErrorKind::Degenerate, "gradient grows too fast for a finite g(t)");

  // ‖∇u‖² ≈ c⁻²(T−τ)^{−2a} beyond the last point
  const double d = T - t[n - 1];
  const double tail = std::pow(c, -2.0) * std::pow(d, 2 - 2 * a) / (2 - 2 * a);
  out.times.assign(t.begin(), t.end());
  out.g.assign(n, 0.0);
  out.g[n - 1] = tail;
  for (std::size_t i = n - 1; i-- > 0;)
    out.g[i] = out.g[i + 1] +
               0.5 * (t[i + 1] - t[i]) * ((T - t[i]) * kinetic[i] + (T - t[i + 1]) * kinetic[i + 1]);

  // final decade of T − t
  std::vector<double> lx, ly, ratio;
  double gconst = 0;
  out.t_hi = t[n - 1];
  out.t_lo = t[n - 1];
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = T - t[i];
    if (!(tau <= 10.0 * d)) continue;
    out.t_lo = std::min(out.t_lo, t[i]);
    lx.push_back(std::log(tau));
    ly.push_back(std::log(out.g[i]));
    ratio.push_back(out.g[i] / std::pow(tau, out.exponent_predicted));
    gconst = std::max(gconst, std::sqrt(kinetic[i]) * std::pow(tau, out.gradient_exponent_predicted));
  }
  out.window_points = lx.size();
  if (lx.size() < 3) fail(ErrorKind::Degenerate, "rate fit window has fewer than 3 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= double(lx.size());
  my /= double(lx.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  out.exponent_fitted = sxx > 0 ? sxy / sxx : 0.0;
  const double med = median(ratio);
  out.constant_fitted = *std::max_element(ratio.begin(), ratio.end());
  out.max_ratio_drift = out.constant_fitted / med;
  out.min_ratio_drift = med / *std::min_element(ratio.begin(), ratio.end());
  out.gradient_constant = gconst;
  out.gradient_bound_consistent = a <= out.gradient_exponent_predicted + 1e-2;
  return out;
}

RateFit blowup_rate_check(const Trajectory& traj, RateSymmetry sym) {
  check_branch(traj.params().p, sym);
  if (traj.termination != Termination::BlowupThreshold)
    fail(ErrorKind::Precondition, "rate check needs a trajectory that hit the blow-up threshold");
  if (sym == RateSymmetry::Cylindrical && traj.radial())
    fail(ErrorKind::Domain, "cylindrical rate check applied to a radial run");
  std::vector<double> t, k;
  for (const auto& s : traj.step_log) {
    if (!t.empty() && !(s.t > t.back())) continue;
    t.push_back(s.t);
    k.push_back(s.kinetic);
  }
  return rate_fit(t, k, traj.params().p, sym);
}

}  // namespace nls
