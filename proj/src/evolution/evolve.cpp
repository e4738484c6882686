#include "nls/evolution/evolve.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/core/snapshot.hpp"
#include "nls/evolution/stepper.hpp"

namespace nls {

double StepPolicy::dt_for(double h, double max_abs, double p) const {
  double dt = dt_max;
  if (c_cfl > 0) dt = std::min(dt, c_cfl * h * h / std::numbers::pi);
  if (c_nl > 0) dt = std::min(dt, c_nl / (1.0 + std::pow(max_abs, p - 1.0)));
  return dt;
}

namespace {

std::filesystem::path default_spill_dir() {
  static std::atomic<int> counter{0};
  return std::filesystem::temp_directory_path() /
         ("nls-spill-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
}

// Resolution is rechecked this often between samples, so blow-up runs stop before the
// core outgrows the grid even when no sample falls in the final stretch.
constexpr std::size_t kTailCheckEvery = 50;

}  // namespace

Trajectory evolve(const FieldState& initial, double t_end, const PhysParams& params,
                  const StepPolicy& policy, const std::vector<Probe>& probes) {
  initial.check_finite();
  if (!(t_end > initial.time)) fail(ErrorKind::Domain, "evolve: t_end must exceed the initial time");
  if (!(policy.dt_max > 0) || !(policy.sample_interval > 0))
    fail(ErrorKind::Domain, "evolve: dt_max and sample_interval must be positive");
  const auto start = std::chrono::steady_clock::now();

  Trajectory tr(initial.grid, params);
  tr.taint_tolerance = policy.taint_tolerance;
  const SplitStepper st(initial.grid, params);
  const double h = initial.is_cartesian() ? initial.cartesian().spacing() : initial.radial().spacing();
  const std::size_t state_bytes = initial.size() * sizeof(cplx);
  std::size_t held = 0;
  std::filesystem::path spill = policy.spill_dir;

  CField u = initial.values;
  double t = initial.time;

  auto record = [&](double time) {
    FieldState s(initial.grid, u, time);
    const FunctionalReport rep = report(s, params, RadialKinetic::Sine);
    Sample smp;
    smp.time = time;
    smp.boundary_fraction = boundary_fraction(s);
    smp.spectral_tail = st.spectral_tail(u);
    for (const auto& probe : probes) probe(s, rep);
    if (policy.keep_states) {
      if (held + state_bytes <= policy.memory_budget) {
        held += state_bytes;
        smp.state = std::move(s);
      } else {
        if (spill.empty()) spill = default_spill_dir();
        std::filesystem::create_directories(spill);
        char name[32];
        std::snprintf(name, sizeof name, "sample_%06zu.nlsfield", tr.samples.size());
        smp.file = spill / name;
        write_snapshot(smp.file, s);
      }
    }
    const double tail = smp.spectral_tail;
    tr.add_sample(std::move(smp), rep);
    return tail;
  };

  const double tail0 = record(t);
  const double kin0 = tr.reports.front().kinetic;
  const double grad_limit = kin0 > 0 ? policy.blowup_factor * std::sqrt(kin0)
                                     : std::numeric_limits<double>::infinity();
  double mx = max_abs(u);
  tr.step_log.push_back({t, 0.0, mx, kin0});
  if (tail0 > policy.resolution_tolerance) {
    tr.termination = Termination::ResolutionLimit;
    tr.message = "initial state is not resolved";
    return tr;
  }

  const double t0 = t;
  std::size_t next_k = 1;
  auto next_sample = [&] { return std::min(t_end, t0 + double(next_k) * policy.sample_interval); };
  std::size_t steps = 0;
  tr.termination = Termination::ReachedT;

  while (t < t_end) {
    if (steps >= policy.max_steps) {
      tr.termination = Termination::StepLimit;
      tr.message = "step budget exhausted";
      break;
    }
    const double target = next_sample();
    double dt = policy.dt_for(h, mx, params.p);
    bool lands = false;
    // land exactly on sample times; absorb a remainder shorter than a tenth of a step
    if (t + 1.1 * dt >= target) {
      dt = target - t;
      lands = true;
    }
    if (dt < policy.dt_min && !lands) {
      tr.termination = Termination::ResolutionLimit;
      tr.message = "time step fell below dt_min";
      break;
    }
    const auto info = st.step(u, dt);
    if (!info.finite) {
      std::ostringstream os;
      os << "non-finite field after step " << steps + 1 << "; last good time " << t;
      tr.termination = Termination::Diverged;
      tr.message = os.str();
      break;
    }
    t = lands ? target : t + dt;
    ++steps;
    mx = info.max_abs;
    tr.step_log.push_back({t, dt, mx, info.kinetic});

    if (std::sqrt(info.kinetic) > grad_limit) {
      record(t);
      tr.termination = Termination::BlowupThreshold;
      std::ostringstream os;
      os << "gradient norm exceeded " << policy.blowup_factor << "x its initial value at t = " << t;
      tr.message = os.str();
      break;
    }
    if (lands) {
      while (next_sample() <= t && next_sample() < t_end) ++next_k;
      if (record(t) > policy.resolution_tolerance) {
        tr.termination = Termination::ResolutionLimit;
        tr.message = "spectral tail exceeded the resolution tolerance";
        break;
      }
    } else if (steps % kTailCheckEvery == 0 && st.spectral_tail(u) > policy.resolution_tolerance) {
      record(t);
      tr.termination = Termination::ResolutionLimit;
      tr.message = "spectral tail exceeded the resolution tolerance";
      break;
    }
  }
  tr.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return tr;
}

}  // namespace nls
