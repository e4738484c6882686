#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nls/core/params.hpp"
#include "nls/evolution/evolve.hpp"
#include "nls/harness/config.hpp"
#include "nls/harness/manifest.hpp"
#include "nls/variational/ground_state.hpp"

namespace nls {

std::vector<std::string> preset_names();
// Keys shared by every preset ([physics], [grid], [ground], [datum], [evolve], [run]).
Config base_config();
// Every key a preset understands, with its default. Unknown names are a Usage error.
Config preset_defaults(const std::string& name);

// Building blocks shared with the command line tool.
PhysParams params_from(const Config& c);
Grid grid_from(const Config& c);
StepPolicy policy_from(const Config& c);
// Ground state on the radial run grid, or on [ground] r_max/m for Cartesian runs.
GroundState ground_state_for(const Config& c);
// datum.kind: ground (λ-rescaled ψ, lifted onto Cartesian grids), gaussian, two-gaussians.
FieldState datum_from(const Config& c, const GroundState* gs);

// Resolves defaults < file values < overrides, runs the preset and writes
// out_dir/<preset>/ with its CSVs, snapshots and manifest.json.
RunManifest run_scenario(const std::string& name, const std::vector<std::string>& overrides,
                         const std::filesystem::path& out_dir, const Config& file_values = {});

// Re-runs a manifest's resolved configuration into out_dir and returns the largest relative
// difference between the two trajectory.csv tables (0 for a bit-identical replay).
double replay_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

}  // namespace nls
