#include "nls/evolution/trajectory.hpp"

#include <cmath>

#include "nls/core/error.hpp"
#include "nls/core/snapshot.hpp"

namespace nls {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ReachedT: return "reached_t";
    case Termination::BlowupThreshold: return "blowup_threshold";
    case Termination::Diverged: return "diverged";
    case Termination::ResolutionLimit: return "resolution_limit";
    case Termination::StepLimit: return "step_limit";
  }
  return "?";
}

FieldState Trajectory::state(std::size_t i) const {
  const Sample& s = samples.at(i);
  if (s.state) return *s.state;
  if (!s.file.empty()) return read_snapshot(s.file);
  fail(ErrorKind::Precondition, "trajectory sample was recorded without its state");
}

void Trajectory::add_sample(Sample s, const FunctionalReport& r) {
  if (!samples.empty() && !(s.time > samples.back().time))
    fail(ErrorKind::Precondition, "trajectory sample times must increase");
  if (s.boundary_fraction > taint_tolerance && !tainted) {
    tainted = true;
    taint_time = s.time;
  }
  samples.push_back(std::move(s));
  reports.push_back(r);
}

double boundary_fraction(const FieldState& s) {
  double total = 0, outer = 0;
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    const double rc = 0.45 * g.box_length();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Vec3 x = g.position(i);
      const double w = std::norm(s.values[i]);
      total += w;
      if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > rc * rc) outer += w;
    }
  } else {
    const auto& g = s.radial();
    const double rc = 0.9 * g.r_max();
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double r = g.r(j);
      const double w = r * r * std::norm(s.values[j]);
      total += w;
      if (r > rc) outer += w;
    }
  }
  return total > 0 ? outer / total : 0.0;
}

}  // namespace nls
