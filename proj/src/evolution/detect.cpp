#include "nls/evolution/detect.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/evolution/stepper.hpp"

namespace nls {

const char* to_string(ScatterVerdict v) {
  switch (v) {
    case ScatterVerdict::Scattering: return "scattering";
    case ScatterVerdict::NotScattering: return "not_scattering";
    case ScatterVerdict::Inconclusive: return "inconclusive";
    case ScatterVerdict::NotApplicable: return "not_applicable";
  }
  return "?";
}

namespace {

double h1_norm(const FieldState& s) {
  return std::sqrt(mass(s) + kinetic(s, RadialKinetic::Sine));
}

}  // namespace

ScatteringReport detect_scattering(const Trajectory& traj, const ScatteringOptions& opt) {
  ScatteringReport rep;
  rep.tolerance = opt.tolerance;
  if (traj.termination == Termination::BlowupThreshold) {
    rep.verdict = ScatterVerdict::NotApplicable;
    rep.reason = "trajectory hit the blow-up threshold";
    return rep;
  }
  if (traj.termination != Termination::ReachedT) {
    rep.reason = std::string("trajectory ended early: ") + to_string(traj.termination);
    return rep;
  }
  if (traj.samples.empty()) {
    rep.reason = "empty trajectory";
    return rep;
  }
  const double t0 = traj.samples.front().time, t1 = traj.final_time();
  const double start = t0 + opt.window_fraction * (t1 - t0);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj.size(); ++i)
    if (traj.samples[i].time >= start) idx.push_back(i);
  if (idx.size() > opt.max_window) idx.erase(idx.begin(), idx.end() - opt.max_window);
  for (auto i : idx) rep.times.push_back(traj.samples[i].time);
  if (idx.size() < 4) {
    rep.reason = "fewer than 4 samples in the asymptotic window";
    return rep;
  }
  if (traj.tainted && traj.taint_time <= rep.times.back()) {
    std::ostringstream os;
    os << "boundary mass exceeded the tolerance at t = " << traj.taint_time;
    rep.reason = os.str();
    return rep;
  }

  const double p1 = traj.params().p + 1.0;
  std::optional<FieldState> prev;
  double ref = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const FieldState s = traj.state(idx[k]);
    if (k == 0) rep.lp_first = lebesgue_norm(s, p1);
    if (k + 1 == idx.size()) {
      rep.lp_last = lebesgue_norm(s, p1);
      ref = h1_norm(s);
    }
    FieldState w = free_evolve(s, -s.time);
    if (prev) {
      FieldState d(w.grid, w.values, 0.0);
      for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= prev->values[i];
      rep.increments.push_back(h1_norm(d));
    }
    prev = std::move(w);
  }
  if (ref > 0)
    for (auto& v : rep.increments) v /= ref;

  bool decreasing = true;
  for (std::size_t k = 1; k < rep.increments.size(); ++k)
    if (!(rep.increments[k] < rep.increments[k - 1])) decreasing = false;
  const bool small = rep.increments.back() < opt.tolerance;
  rep.verdict = decreasing && small ? ScatterVerdict::Scattering : ScatterVerdict::NotScattering;
  if (!decreasing) rep.reason = "increments do not decrease";
  else if (!small) rep.reason = "last increment above tolerance";
  return rep;
}

PowerFit fit_vanishing_power(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n != y.size()) fail(ErrorKind::Dimension, "power fit: size mismatch");
  if (n < 3) fail(ErrorKind::Degenerate, "power fit needs at least 3 points");
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0) || !std::isfinite(y[i])) fail(ErrorKind::Domain, "power fit needs positive data");
    if (i && !(t[i] > t[i - 1])) fail(ErrorKind::Domain, "power fit needs increasing times");
    z[i] = std::log(y[i]);
  }
  const double span = t[n - 1] - t[0];

  struct Lin {
    double slope, intercept, sse;
  };
  auto linear = [&](double T) {
    double sx = 0, sz = 0, sxx = 0, sxz = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = std::log(T - t[i]);
      sx += x;
      sz += z[i];
      sxx += x * x;
      sxz += x * z[i];
    }
    const double mx = sx / n, mz = sz / n;
    const double vxx = sxx - n * mx * mx;
    const double slope = vxx > 0 ? (sxz - n * mx * mz) / vxx : 0.0;
    const double icpt = mz - slope * mx;
    double sse = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = z[i] - icpt - slope * std::log(T - t[i]);
      sse += e * e;
    }
    return Lin{slope, icpt, sse};
  };
  // search over s = log(T − t_last)
  auto cost = [&](double s) { return linear(t[n - 1] + std::exp(s)).sse; };
  const double lo = std::log(1e-10 * span), hi = std::log(10.0 * span);
  const int grid = 400;
  int best = 0;
  double best_c = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double c = cost(lo + (hi - lo) * k / grid);
    if (c < best_c) {
      best_c = c;
      best = k;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
  const double b = lo + (hi - lo) * std::min(grid, best + 1) / grid;
  const auto r = boost::math::tools::brent_find_minima(cost, a, b, 52);
  const double T = t[n - 1] + std::exp(r.first);
  const Lin fit = linear(T);
  PowerFit out;
  out.t_star = T;
  out.exponent = fit.slope;
  out.coefficient = std::exp(fit.intercept);
  out.rms_log_residual = std::sqrt(fit.sse / n);
  out.points = n;
  return out;
}

namespace {

// Start of the final decade of a vanishing series: the last index at which y was still at
// least ten times its final value. Falls back to the last maximum when y never spans a decade.
std::size_t decade_start(std::span<const double> y, bool& full) {
  const double last = y.back();
  for (std::size_t i = y.size(); i-- > 0;)
    if (y[i] >= 10.0 * last) {
      full = true;
      return i;
    }
  full = false;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] >= y[arg]) arg = i;
  return arg;
}

}  // namespace

BlowupEstimate estimate_blowup(std::span<const double> t, std::span<const double> max_abs,
                               std::span<const double> grad) {
  const std::size_t n = t.size();
  if (max_abs.size() != n || grad.size() != n) fail(ErrorKind::Dimension, "blow-up fit: size mismatch");
  std::vector<double> y1(n), y2(n);
  for (std::size_t i = 0; i < n; ++i) {
    y1[i] = 1.0 / max_abs[i];
    y2[i] = 1.0 / grad[i];
  }
  BlowupEstimate est;
  bool full1 = false, full2 = false;
  const std::size_t s1 = decade_start(y1, full1), s2 = decade_start(y2, full2);
  if (n - s1 < 3 || n - s2 < 3) fail(ErrorKind::Degenerate, "blow-up fit window has fewer than 3 points");
  est.fit_max_abs = fit_vanishing_power(t.subspan(s1), std::span<const double>(y1).subspan(s1));
  est.fit_gradient = fit_vanishing_power(t.subspan(s2), std::span<const double>(y2).subspan(s2));
  est.t_star_max_abs = est.fit_max_abs.t_star;
  est.t_star_gradient = est.fit_gradient.t_star;
  est.t_star = 0.5 * (est.t_star_max_abs + est.t_star_gradient);
  est.uncertainty = std::abs(est.t_star_max_abs - est.t_star_gradient);
  est.window_start = t[std::min(s1, s2)];
  for (std::size_t i = s2 + 1; i < n; ++i)
    if (grad[i] < grad[i - 1] * (1.0 - 1e-9)) est.low_confidence = true;
  if (!full1 || !full2) est.note = "a reciprocal series spans less than a decade; fit uses its tail after the last maximum";
  return est;
}

BlowupEstimate detect_blowup(const Trajectory& traj) {
  if (traj.termination != Termination::BlowupThreshold)
    fail(ErrorKind::Precondition, "detect_blowup needs a trajectory that hit the blow-up threshold");
  std::vector<double> t, mx, g;
  for (const auto& s : traj.step_log) {
    if (!t.empty() && !(s.t > t.back())) continue;
    t.push_back(s.t);
    mx.push_back(s.max_abs);
    g.push_back(std::sqrt(s.kinetic));
  }
  return estimate_blowup(t, mx, g);
}

}  // namespace nls
