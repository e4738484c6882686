#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

enum class Termination { ReachedT, BlowupThreshold, Diverged, ResolutionLimit, StepLimit };
const char* to_string(Termination t);

struct StepRecord {
  double t;
  double dt;
  double max_abs;
  double kinetic;  // ∫|∇u|² at t
};

struct Sample {
  double time = 0;
  std::optional<FieldState> state;  // empty once spilled
  std::filesystem::path file;       // snapshot path of a spilled sample
  double boundary_fraction = 0;     // mass outside the trusted region over total mass
  double spectral_tail = 0;
};

class Trajectory {
 public:
  Trajectory(Grid grid, PhysParams params) : grid_(std::move(grid)), params_(params) {}

  const Grid& grid() const { return grid_; }
  const PhysParams& params() const { return params_; }
  bool radial() const { return std::holds_alternative<RadialGrid>(grid_); }
  // Kinetic convention of the reports: sine modes on radial grids, Fourier on Cartesian.
  RadialKinetic kinetic_mode() const { return RadialKinetic::Sine; }

  std::vector<Sample> samples;
  std::vector<FunctionalReport> reports;
  std::vector<StepRecord> step_log;
  Termination termination = Termination::ReachedT;
  std::string message;

  // Set once any sample carries boundary mass above the tolerance.
  bool tainted = false;
  double taint_time = 0;
  double taint_tolerance = 1e-8;
  double wall_seconds = 0;

  std::size_t size() const { return samples.size(); }
  // Loads spilled samples back from disk.
  FieldState state(std::size_t i) const;
  const FunctionalReport& report(std::size_t i) const { return reports.at(i); }
  double final_time() const { return samples.empty() ? 0.0 : samples.back().time; }

  // Appends a sample; times must increase strictly.
  void add_sample(Sample s, const FunctionalReport& r);

 private:
  Grid grid_;
  PhysParams params_;
};

// Mass beyond 0.45·L (Cartesian, Euclidean |x|) or 0.9·r_max (radial) over total mass.
double boundary_fraction(const FieldState& s);

}  // namespace nls
