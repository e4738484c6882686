#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "nls/evolution/trajectory.hpp"

namespace nls {

struct StepPolicy {
  double dt_max = 1e-3;
  double c_cfl = 0.0;  // 0 disables the h²/π cap; split stepping is unconditionally stable
  double c_nl = 0.1;   // 0 disables the nonlinear-frequency cap
  double dt_min = 1e-14;
  double sample_interval = 0.1;
  double blowup_factor = 1e3;  // multiple of the initial ‖∇u‖
  double taint_tolerance = 1e-8;
  double resolution_tolerance = 1e-6;
  std::size_t max_steps = 50'000'000;
  std::size_t memory_budget = std::size_t(1) << 30;  // bytes of in-memory samples
  std::filesystem::path spill_dir;                   // empty: a temp directory
  bool keep_states = true;                           // false keeps reports only

  double dt_for(double h, double max_abs, double p) const;
};

// Called after each recorded sample, synchronously; must not modify the state.
using Probe = std::function<void(const FieldState&, const FunctionalReport&)>;

Trajectory evolve(const FieldState& initial, double t_end, const PhysParams& params,
                  const StepPolicy& policy, const std::vector<Probe>& probes = {});

}  // namespace nls
