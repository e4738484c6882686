#include "nls/diagnostics/windows.hpp"

#include <cmath>

#include "nls/core/error.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

namespace {

WindowNorm integrate_norms(const std::vector<double>& t, const std::vector<double>& f, double m1) {
  WindowNorm out;
  out.samples = t.size();
  out.low_resolution = t.size() < 8;
  if (t.empty()) return out;
  out.t_lo = t.front();
  out.t_hi = t.back();
  double acc = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    acc += 0.5 * (t[i + 1] - t[i]) * (std::pow(f[i], m1) + std::pow(f[i + 1], m1));
  out.value = std::pow(acc, 1.0 / m1);
  return out;
}

void check_window(double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) fail(ErrorKind::Domain, "window norm needs t_lo < t_hi");
}

}  // namespace

WindowNorm scattering_window_norm(const std::vector<double>& times, const std::vector<FieldState>& states,
                                  double t_lo, double t_hi, const StrichartzExponentTable& table) {
  check_window(t_lo, t_hi);
  if (times.size() != states.size()) fail(ErrorKind::Precondition, "times and states differ in length");
  std::vector<double> t, f;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_lo - 1e-12 || times[i] > t_hi + 1e-12) continue;
    t.push_back(times[i]);
    f.push_back(lebesgue_norm(states[i], table.b1));
  }
  return integrate_norms(t, f, table.m1);
}

WindowNorm scattering_window_norm(const Trajectory& traj, double t_lo, double t_hi,
                                  const StrichartzExponentTable& table) {
  check_window(t_lo, t_hi);
  if (traj.tainted && t_hi > traj.taint_time)
    fail(ErrorKind::Precondition, "window extends past the time the run became tainted");
  std::vector<double> t, f;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double ti = traj.samples[i].time;
    if (ti < t_lo - 1e-12 || ti > t_hi + 1e-12) continue;
    t.push_back(ti);
    f.push_back(lebesgue_norm(traj.state(i), table.b1));
  }
  return integrate_norms(t, f, table.m1);
}

}  // namespace nls
