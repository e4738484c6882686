// nls-lab: command line front end for ground states, runs, presets and the acceptance suite.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nls/core/error.hpp"
#include "nls/core/snapshot.hpp"
#include "nls/diagnostics/boost.hpp"
#include "nls/diagnostics/coercivity.hpp"
#include "nls/diagnostics/exponents.hpp"
#include "nls/diagnostics/morawetz.hpp"
#include "nls/evolution/evolve.hpp"
#include "nls/functionals/report.hpp"
#include "nls/harness/acceptance.hpp"
#include "nls/harness/csv.hpp"
#include "nls/harness/manifest.hpp"
#include "nls/harness/presets.hpp"
#include "nls/variational/classify.hpp"
#include "nls/variational/ground_state.hpp"
#include "nls/weights/cutoff.hpp"

#ifndef NLS_VERSION
#define NLS_VERSION "dev"
#endif

namespace fs = std::filesystem;
using namespace nls;

namespace {

constexpr int kPass = 0, kFailure = 1, kUsage = 2;

struct Globals {
  std::string config_path;
  std::string out_dir = "runs";
  int threads = 1;
  std::int64_t seed = -1;
  std::vector<std::string> sets;
};

// Defaults, then the --config file, then --set, then --seed.
Config resolve(const Globals& g, Config defaults) {
  if (!g.config_path.empty()) defaults.merge(Config::load(g.config_path));
  for (const auto& s : g.sets) defaults.apply_override(s);
  if (g.seed >= 0) defaults.set("run.seed", std::to_string(g.seed));
  return defaults;
}

Config file_and_sets(const Globals& g) {
  Config c;
  if (!g.config_path.empty()) c = Config::load(g.config_path);
  if (g.seed >= 0) c.set("run.seed", std::to_string(g.seed));
  return c;
}

void print_report(const FunctionalReport& r) {
  std::printf("mass      %.17g\nkinetic   %.17g\nlq        %.17g\nlp        %.17g\nenergy    %.17g\n"
              "action    %.17g\npohozaev  %.17g\ni_omega   %.17g\n",
              r.mass, r.kinetic, r.lq, r.lp, r.energy, r.action, r.pohozaev, r.i_omega);
}

int cmd_ground_state(const Globals& g, const std::string& method, const std::string& out) {
  const Config c = resolve(g, base_config());
  const auto params = params_from(c);
  const RadialGrid grid(c.get_double("ground.r_max"), c.get_int("ground.m"));
  GroundState gs;
  if (method == "shooting") {
    gs = ground_state_shooting(params, grid);
  } else if (method == "flow") {
    FlowOptions fo;
    fo.reference_m = ground_state_shooting(params, grid).m_omega;
    gs = ground_state_flow(params, grid, fo);
  } else {
    fail(ErrorKind::Usage, "method must be shooting or flow");
  }
  std::printf("method            %s\nm_omega           %.17g\namplitude         %.17g\node_residual      %.3g\n"
              "pohozaev_residual %.3g\n",
              gs.method.c_str(), gs.m_omega, gs.amplitude, gs.ode_residual, gs.pohozaev_residual);
  if (!out.empty()) {
    CsvWriter w(out, {"r", "psi"});
    for (std::size_t j = 0; j < gs.profile.size(); ++j) w.row(std::vector<double>{grid.r(j), gs.profile[j]});
    w.close();
  }
  return kPass;
}

int cmd_evolve(const Globals& g) {
  const Config c = resolve(g, base_config());
  const auto params = params_from(c);
  std::optional<GroundState> gs;
  if (c.get("datum.kind") == "ground") gs = ground_state_for(c);
  const auto u0 = datum_from(c, gs ? &*gs : nullptr);
  const auto tr = evolve(u0, c.get_double("evolve.t_end"), params, policy_from(c));
  const fs::path dir = fs::path(g.out_dir) / "evolve";
  fs::create_directories(dir);
  RunManifest m;
  m.preset = "evolve";
  m.version = NLS_VERSION;
  m.config = c;
  m.regime = to_string(params.regime);
  m.grid = c.get("grid.kind");
  m.termination = to_string(tr.termination);
  m.steps = tr.step_log.size();
  m.samples = tr.size();
  m.wall_seconds = tr.wall_seconds;
  write_trajectory_csv(dir / "trajectory.csv", tr, gs ? gs->m_omega : 0.0);
  m.add_file(dir, "trajectory.csv", "csv");
  write_steps_csv(dir / "steps.csv", tr);
  m.add_file(dir, "steps.csv", "csv");
  write_snapshot(dir / "final.nls", tr.state(tr.size() - 1));
  m.add_file(dir, "final.nls", "snapshot");
  write_manifest(dir / "manifest.json", m);
  std::printf("termination %s at t = %.6g after %zu steps\n%s\n", to_string(tr.termination), tr.final_time(),
              tr.step_log.size(), (dir / "manifest.json").string().c_str());
  return kPass;
}

int cmd_classify(const Globals& g, const std::string& snapshot) {
  const Config c = resolve(g, base_config());
  const auto params = params_from(c);
  const auto gs = ground_state_shooting(params, RadialGrid(c.get_double("ground.r_max"), c.get_int("ground.m")));
  auto configured = [&] {
    if (c.get("datum.kind") != "ground") return datum_from(c, nullptr);
    const auto own = ground_state_for(c);
    return datum_from(c, &own);
  };
  const FieldState s = snapshot.empty() ? configured() : read_snapshot(snapshot);
  const auto r = classify(s, params, gs.m_omega, s.is_radial() ? RadialKinetic::Sine : RadialKinetic::FiniteDifference);
  std::printf("membership     %s\nm_omega        %.17g\naction_margin  %.17g\npohozaev       %.17g\nconfidence     %.3g\n",
              to_string(r.membership), gs.m_omega, r.action_margin, r.pohozaev_value, r.confidence);
  return kPass;
}

int cmd_weights_verify(const Globals& g, double eta, double radius, int n, double box) {
  const Config c = resolve(g, base_config());
  const auto params = params_from(c);
  const CartesianGrid grid(n, box);
  const auto props = verify_cutoff_properties(build_cutoff_family(eta, radius, grid, params.p, params.q));
  fs::create_directories(g.out_dir);
  const fs::path path = fs::path(g.out_dir) / "cutoff.csv";
  std::ofstream out(path);
  out << cutoff_csv_header() << "\n";
  double worst = 0;
  for (const auto& p : props) {
    out << to_csv_row(p) << "\n";
    worst = std::max(worst, p.violation());
    std::printf("%-28s margin %+.3e  fitted %.4g  pinned %.4g\n", p.property.c_str(), p.worst_margin, p.fitted_constant,
                p.pinned_constant);
  }
  std::printf("worst violation %.3e -> %s\n", worst, path.string().c_str());
  return worst < 1e-10 ? kPass : kFailure;
}

int cmd_diagnose(const Globals& g, const std::string& what, const std::string& snapshot, double radius, double eta) {
  const Config c = resolve(g, base_config());
  const auto params = params_from(c);
  if (what == "exponents") {
    const auto t = strichartz_table(params);
    std::printf("%s\n", exponent_csv_header().c_str());
    for (const auto& row : to_csv_rows(t)) std::printf("%s\n", row.c_str());
    return t.max_residual() < 1e-12 ? kPass : kFailure;
  }
  if (snapshot.empty()) fail(ErrorKind::Usage, "diagnose " + what + " needs --snapshot");
  const auto s = read_snapshot(snapshot);
  if (what == "report") {
    print_report(report(s, params, s.is_radial() ? RadialKinetic::Sine : RadialKinetic::FiniteDifference));
    return kPass;
  }
  if (what == "coercivity") {
    CoercivityOptions opt;
    opt.radii = {radius};
    opt.eta = eta;
    const auto scan = coercivity_scan(std::vector<FieldState>{s}, params, opt);
    std::printf("delta_hat %.17g at z = (%g, %g, %g), R = %g over %zu points\n", scan.delta_hat, scan.argmin.z[0],
                scan.argmin.z[1], scan.argmin.z[2], scan.argmin.radius, scan.evaluations);
    return kPass;
  }
  if (what == "morawetz") {
    const auto fam = build_cutoff_profile(eta, radius, params.p, params.q);
    const auto t = morawetz_derivative_terms(s, fam, params);
    std::printf("action %.17g\n", morawetz_action(s, fam));
    for (int k = 0; k < 5; ++k) std::printf("term%d  %.17g\n", k + 1, t.term[k]);
    std::printf("sum    %.17g\n", t.sum());
    return kPass;
  }
  fail(ErrorKind::Usage, "diagnose: unknown kind '" + what + "' (exponents, report, coercivity, morawetz)");
}

int cmd_run(const Globals& g, const std::string& preset) {
  const auto m = run_scenario(preset, g.sets, g.out_dir, file_and_sets(g));
  std::printf("%s: termination %s, %zu steps, %.1f s\n", preset.c_str(), m.termination.c_str(), m.steps, m.wall_seconds);
  for (const auto& [k, v] : m.results) std::printf("  %-36s %.10g\n", k.c_str(), v);
  for (const auto& [k, v] : m.notes) std::printf("  %-36s %s\n", k.c_str(), v.c_str());
  std::printf("%s\n", (fs::path(g.out_dir) / preset / "manifest.json").string().c_str());
  return m.passed ? kPass : kFailure;
}

int cmd_replay(const Globals& g, const std::string& manifest) {
  const double d = replay_manifest(manifest, fs::path(g.out_dir) / "replay");
  std::printf("largest relative difference of the functional reports: %.3g\n", d);
  return d <= 1e-12 ? kPass : kFailure;
}

int cmd_verify(const std::string& level, bool flip, const std::vector<std::string>& only, std::int64_t seed) {
  AcceptanceOptions opt;
  opt.flip_term4_sign = flip;
  opt.only = only;
  opt.seed = seed < 0 ? 0 : std::uint64_t(seed);
  opt.on_result = [](const CriterionResult& r) { std::printf("%s\n", format_result(r).c_str()), std::fflush(stdout); };
  const auto results = run_acceptance(parse_verify_level(level), opt);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? kPass : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nls-lab: numerical experiments for the double-power NLS in three dimensions"};
  app.set_version_flag("--version", NLS_VERSION);
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "INI file with [section] key = value entries")->check(CLI::ExistingFile);
  app.add_option("--out-dir", g.out_dir, "directory for run outputs")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (this build computes on one)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized checks (default 0)")->check(CLI::NonNegativeNumber);
  app.add_option("--set", g.sets, "override a config value: section.key=value or key=value");

  std::string method = "shooting", profile_out;
  auto* gs = app.add_subcommand("ground-state", "compute the ground state and its certificates");
  gs->add_option("--method", method, "shooting or flow")->capture_default_str();
  gs->add_option("--profile", profile_out, "write r, psi to this CSV");

  auto* ev = app.add_subcommand("evolve", "evolve the configured datum and write trajectory CSVs");

  std::string snapshot;
  auto* cl = app.add_subcommand("classify", "classify a snapshot or the configured datum as A+ / A-");
  cl->add_option("--snapshot", snapshot, "snapshot file")->check(CLI::ExistingFile);

  double eta = 0.1, radius = 8, box = 64;
  int n = 64;
  auto* wt = app.add_subcommand("weights", "cutoff and weight utilities");
  auto* wv = wt->add_subcommand("verify", "check the cutoff inequalities on a tabulation");
  wt->require_subcommand(1);
  wv->add_option("--eta", eta)->capture_default_str();
  wv->add_option("--radius", radius)->capture_default_str();
  wv->add_option("--n", n)->capture_default_str();
  wv->add_option("--box", box)->capture_default_str();

  std::string what;
  double d_radius = 8, d_eta = 0.5;
  auto* dg = app.add_subcommand("diagnose", "diagnostics of a single state or of the exponents");
  dg->add_option("kind", what, "exponents, report, coercivity or morawetz")->required();
  dg->add_option("--snapshot", snapshot, "snapshot file")->check(CLI::ExistingFile);
  dg->add_option("--radius", d_radius)->capture_default_str();
  dg->add_option("--eta", d_eta)->capture_default_str();

  std::string preset;
  auto* rn = app.add_subcommand("run", "run a preset scenario with its diagnostic bundle");
  rn->add_option("preset", preset, "preset name")->required()->check(CLI::IsMember(preset_names()));

  std::string manifest;
  auto* rp = app.add_subcommand("replay", "re-run a manifest and compare its functional reports");
  rp->add_option("manifest", manifest)->required()->check(CLI::ExistingFile);

  std::string level = "quick";
  bool flip = false;
  std::vector<std::string> only;
  auto* vf = app.add_subcommand("verify", "acceptance suite");
  vf->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  vf->add_flag("--flip-term4", flip, "deliberate fault in the Morawetz derivative (the identity check must fail)");
  vf->add_option("--only", only, "run only these criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*gs) return cmd_ground_state(g, method, profile_out);
    if (*ev) return cmd_evolve(g);
    if (*cl) return cmd_classify(g, snapshot);
    if (*wv) return cmd_weights_verify(g, eta, radius, n, box);
    if (*dg) return cmd_diagnose(g, what, snapshot, d_radius, d_eta);
    if (*rn) return cmd_run(g, preset);
    if (*rp) return cmd_replay(g, manifest);
    if (*vf) return cmd_verify(level, flip, only, g.seed);
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", to_string(e.kind()), e.what());
    return (e.kind() == ErrorKind::Usage || e.kind() == ErrorKind::Regime) ? kUsage : kFailure;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
  return kUsage;
}
