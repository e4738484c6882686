#include "nls/harness/presets.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/core/snapshot.hpp"
#include "nls/diagnostics/coercivity.hpp"
#include "nls/diagnostics/invariance.hpp"
#include "nls/diagnostics/morawetz.hpp"
#include "nls/diagnostics/rates.hpp"
#include "nls/diagnostics/virial.hpp"
#include "nls/diagnostics/windows.hpp"
#include "nls/evolution/detect.hpp"
#include "nls/harness/csv.hpp"
#include "nls/variational/scaling.hpp"

#ifndef NLS_VERSION
#define NLS_VERSION "dev"
#endif

namespace nls {

namespace {

const std::vector<std::string> kPresets{"aplus-scatter",  "aminus-radial-blowup", "aminus-cylindrical-blowup",
                                        "standing-wave",  "small-data",           "morawetz-verify",
                                        "coercivity-scan"};

// Keys shared by every preset; each preset then overrides values and adds its [diag] keys.
Config common() {
  return Config::parse(R"(
[physics]
p = 3
q = 2.5
omega = 1
regime = scattering

[grid]
kind = radial
n = 64
box = 16
r_max = 30
m = 24000

[ground]
r_max = 30
m = 24000

[datum]
kind = ground
lambda = 1
amplitude = 1
width = 1

[evolve]
t_end = 1
dt_max = 1e-3
sample_interval = 0.1
blowup_factor = 1000
c_nl = 0.1

[run]
seed = 0
)");
}

std::string describe(const Grid& g) {
  std::ostringstream os;
  if (const auto* c = std::get_if<CartesianGrid>(&g))
    os << "cartesian n=" << c->n() << " L=" << c->box_length();
  else {
    const auto& r = std::get<RadialGrid>(g);
    os << "radial r_max=" << r.r_max() << " m=" << r.m();
  }
  return os.str();
}

FieldState gaussian_at(const Grid& g, Vec3 c, double amp, double width, Vec3 k) {
  if (const auto* cg = std::get_if<CartesianGrid>(&g))
    return FieldState::sample(*cg, [=](const Vec3& x) {
      double r2 = 0, ph = 0;
      for (int a = 0; a < 3; ++a) {
        r2 += (x[a] - c[a]) * (x[a] - c[a]);
        ph += k[a] * x[a];
      }
      return std::polar(amp * std::exp(-r2 / (2 * width * width)), ph);
    });
  return FieldState::sample(std::get<RadialGrid>(g),
                            [=](double r) { return cplx(amp * std::exp(-r * r / (2 * width * width))); });
}

struct Bundle {
  const Config& cfg;
  std::filesystem::path dir;
  RunManifest& m;

  void check(const std::string& name, bool ok, const std::string& detail) {
    m.notes["check." + name] = (ok ? "pass: " : "fail: ") + detail;
    m.passed = m.passed && ok;
  }
  void csv(const std::string& file) { m.add_file(dir, file, "csv"); }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void virial_bundle(Bundle& b, const Trajectory& tr, VirialKind kind, double rho) {
  const auto s = virial_series(tr, build_virial_weight(kind, rho, tr.grid()));
  write_virial_csv(b.dir / "virial.csv", s);
  b.csv("virial.csv");
  if (kind == VirialKind::Quadratic) {
    b.m.results["virial.identity_residual"] = virial_identity_residual(s);
  } else {
    const auto est = virial_estimate_check(tr, s.weight);
    b.m.results["virial.constant"] = est.constant;
    b.m.results["virial.min_slack"] = est.min_slack;
  }
}

void aplus_bundle(Bundle& b, const Trajectory& tr, const GroundState& gs, bool scan) {
  const auto inv = check_aplus_invariance(tr, gs.m_omega);
  write_invariance_csv(b.dir / "invariance.csv", inv);
  b.csv("invariance.csv");
  b.m.results["invariance.min_slack"] = inv.min_slack;
  b.m.results["invariance.action_gap"] = inv.action_gap;
  b.check("aplus_invariance", inv.holds, inv.holds ? "min slack " + fmt(inv.min_slack) : inv.failure);
  if (!scan) return;
  CoercivityOptions opt;
  opt.radii = b.cfg.get_list("diag.radii");
  opt.eta = b.cfg.get_double("diag.eta");
  opt.stride_factor = b.cfg.get_double("diag.stride");
  opt.sample_stride = std::size_t(b.cfg.get_int("diag.sample_stride"));
  opt.keep_points = true;
  const auto sc = coercivity_scan(tr, opt);
  write_coercivity_csv(b.dir / "coercivity.csv", sc);
  b.csv("coercivity.csv");
  b.m.results["coercivity.delta_hat"] = sc.delta_hat;
  for (std::size_t i = 0; i < sc.radii.size(); ++i)
    b.m.results["coercivity.min_R" + fmt(sc.radii[i])] = sc.min_per_radius[i];
  b.m.notes["coercivity.monotone"] = sc.monotone ? "true" : "false";
  b.check("coercivity", sc.delta_hat > 0 && !sc.vacuous, "delta_hat " + fmt(sc.delta_hat));
}

void scattering_bundle(Bundle& b, const Trajectory& tr) {
  const auto sv = detect_scattering(tr);
  b.m.notes["scattering.verdict"] = to_string(sv.verdict);
  if (!sv.reason.empty()) b.m.notes["scattering.reason"] = sv.reason;
  const auto table = strichartz_table(tr.params());
  const double T = tr.final_time();
  const double end = tr.tainted ? std::min(T, tr.taint_time) : T;
  const auto early = scattering_window_norm(tr, 0.0, 0.5 * end, table);
  const auto late = scattering_window_norm(tr, 0.5 * end, end, table);
  b.m.results["window.early"] = early.value;
  b.m.results["window.late"] = late.value;
  if (early.low_resolution || late.low_resolution) b.m.notes["window.low_resolution"] = "true";
}

void blowup_bundle(Bundle& b, const Trajectory& tr, const GroundState& gs, RateSymmetry sym) {
  const auto inv = check_aminus_invariance(tr, gs.m_omega);
  write_invariance_csv(b.dir / "invariance.csv", inv);
  b.csv("invariance.csv");
  b.m.results["invariance.delta_max"] = inv.delta_max;
  b.m.results["invariance.worst_relative"] = inv.worst_relative;
  b.check("aminus_invariance", inv.holds, inv.holds ? "worst relative slack " + fmt(inv.worst_relative) : inv.failure);
  if (tr.termination != Termination::BlowupThreshold) {
    b.check("blowup", false, std::string("run ended with ") + to_string(tr.termination) + ": " + tr.message);
    return;
  }
  const auto est = detect_blowup(tr);
  b.m.results["blowup.t_star"] = est.t_star;
  b.m.results["blowup.uncertainty"] = est.uncertainty;
  const auto fit = blowup_rate_check(tr, sym);
  write_ratefit_csv(b.dir / "ratefit.csv", fit);
  b.csv("ratefit.csv");
  b.m.results["rate.t_star"] = fit.t_star;
  b.m.results["rate.exponent_fitted"] = fit.exponent_fitted;
  b.m.results["rate.exponent_predicted"] = fit.exponent_predicted;
  b.m.results["rate.max_ratio_drift"] = fit.max_ratio_drift;
  b.m.results["rate.min_ratio_drift"] = fit.min_ratio_drift;
  b.m.results["rate.gradient_exponent_fitted"] = fit.gradient_exponent_fitted;
  const bool ok = fit.max_ratio_drift < 3 && fit.min_ratio_drift < 3 && fit.gradient_bound_consistent;
  b.check("rate", ok, "ratio drift " + fmt(fit.max_ratio_drift) + " / " + fmt(fit.min_ratio_drift));
}

}  // namespace

std::vector<std::string> preset_names() { return kPresets; }

Config base_config() { return common(); }

Config preset_defaults(const std::string& name) {
  Config c = common();
  auto set = [&](const char* text) { c.merge(Config::parse(text)); };
  if (name == "aplus-scatter") {
    set(R"(
[grid]
r_max = 120
m = 65535
[datum]
lambda = 0.8
[evolve]
t_end = 5
sample_interval = 0.05
[diag]
radii = 8,12,16
eta = 0.5
stride = 0.25
sample_stride = 10
)");
  } else if (name == "aminus-radial-blowup") {
    set(R"(
[physics]
regime = blowup
[grid]
m = 65535
[datum]
lambda = 1.2
[evolve]
sample_interval = 0.004
blowup_factor = 10
[diag]
rho = 1
)");
  } else if (name == "aminus-cylindrical-blowup") {
    set(R"(
[physics]
p = 2.8
q = 2.5
regime = blowup
[grid]
kind = cartesian
n = 128
box = 12
[datum]
lambda = 1.2
[evolve]
t_end = 0.5
dt_max = 1e-4
sample_interval = 0.005
blowup_factor = 3
[diag]
rho = 1
)");
  } else if (name == "standing-wave") {
    set(R"(
[grid]
m = 8191
[evolve]
dt_max = 5e-5
c_nl = 0
sample_interval = 0.05
[diag]
tolerance = 1e-4
)");
  } else if (name == "small-data") {
    set(R"(
[grid]
r_max = 60
m = 3071
[datum]
kind = gaussian
amplitude = 0.05
width = 1
[evolve]
t_end = 6
dt_max = 0.01
sample_interval = 0.5
[diag]
r_lo = 4
r_hi = 16
n_r = 3
)");
  } else if (name == "morawetz-verify") {
    set(R"(
[grid]
kind = cartesian
n = 32
box = 16
[datum]
kind = two-gaussians
[evolve]
t_end = 0.02
sample_interval = 1e-3
c_nl = 0
[diag]
radius = 4
eta = 0.5
flip_term4 = 0
tolerance = 1e-2
)");
  } else if (name == "coercivity-scan") {
    set(R"(
[grid]
r_max = 30
m = 16383
[datum]
lambda = 0.8
[evolve]
sample_interval = 0.25
[diag]
radii = 8,12,16
eta = 0.5
stride = 0.25
sample_stride = 1
)");
  } else {
    std::string list;
    for (const auto& p : kPresets) list += (list.empty() ? "" : ", ") + p;
    fail(ErrorKind::Usage, "unknown preset '" + name + "' (known: " + list + ")");
  }
  return c;
}

PhysParams params_from(const Config& c) {
  return PhysParams::make(c.get_double("physics.p"), c.get_double("physics.q"), c.get_double("physics.omega"),
                          parse_regime(c.get("physics.regime")));
}

Grid grid_from(const Config& c) {
  const auto kind = c.get("grid.kind");
  if (kind == "radial") return RadialGrid(c.get_double("grid.r_max"), c.get_int("grid.m"));
  if (kind == "cartesian") return CartesianGrid(c.get_int("grid.n"), c.get_double("grid.box"));
  fail(ErrorKind::Usage, "grid.kind must be radial or cartesian, not '" + kind + "'");
}

StepPolicy policy_from(const Config& c) {
  StepPolicy p;
  p.dt_max = c.get_double("evolve.dt_max");
  p.sample_interval = c.get_double("evolve.sample_interval");
  p.blowup_factor = c.get_double("evolve.blowup_factor");
  p.c_nl = c.get_double("evolve.c_nl");
  return p;
}

GroundState ground_state_for(const Config& c) {
  const auto params = params_from(c);
  const Grid g = grid_from(c);
  if (const auto* rg = std::get_if<RadialGrid>(&g)) return ground_state_shooting(params, *rg);
  return ground_state_shooting(params, RadialGrid(c.get_double("ground.r_max"), c.get_int("ground.m")));
}

FieldState datum_from(const Config& c, const GroundState* gs) {
  const Grid g = grid_from(c);
  const auto kind = c.get("datum.kind");
  if (kind == "ground") {
    if (!gs) fail(ErrorKind::Precondition, "datum.kind = ground needs a ground state");
    const auto psi = rescale(gs->state(), c.get_double("datum.lambda"));
    if (const auto* cg = std::get_if<CartesianGrid>(&g)) return lift_to_cartesian(psi, *cg);
    return psi;
  }
  const double a = c.get_double("datum.amplitude"), w = c.get_double("datum.width");
  if (kind == "gaussian") return gaussian_at(g, {0, 0, 0}, a, w, {0, 0, 0});
  if (kind == "two-gaussians") {
    if (!std::holds_alternative<CartesianGrid>(g)) fail(ErrorKind::Dimension, "two-gaussians needs a Cartesian grid");
    auto u = gaussian_at(g, {2, 0, 0}, a, w, {-0.7, 0, 0});
    const auto v = gaussian_at(g, {-2, 0, 0.5}, 0.8 * a, w, {0.6, 0.2, 0});
    for (std::size_t i = 0; i < u.size(); ++i) u.values[i] += v.values[i];
    return u;
  }
  fail(ErrorKind::Usage, "datum.kind must be ground, gaussian or two-gaussians, not '" + kind + "'");
}

RunManifest run_scenario(const std::string& name, const std::vector<std::string>& overrides,
                         const std::filesystem::path& out_dir, const Config& file_values) {
  const auto wall0 = std::chrono::steady_clock::now();
  const Config defaults = preset_defaults(name);
  Config cfg = defaults;
  cfg.merge(file_values);
  for (const auto& o : overrides) cfg.apply_override(o);
  std::vector<std::string> known;
  for (const auto& [k, v] : defaults.values()) known.push_back(k);
  cfg.require_known(known);

  const auto params = params_from(cfg);
  if (name == "aminus-cylindrical-blowup" && !(params.p < 3))
    fail(ErrorKind::Regime, "cylindrical blow-up needs p < 3, got p = " + fmt(params.p));
  const Grid grid = grid_from(cfg);

  const auto dir = out_dir / name;
  std::filesystem::create_directories(dir);
  RunManifest m;
  m.preset = name;
  m.version = NLS_VERSION;
  m.config = cfg;
  m.grid = describe(grid);
  m.regime = to_string(params.regime);
  {
    std::ofstream out(dir / "config.ini");
    out << cfg.to_ini();
  }
  m.add_file(dir, "config.ini", "config");
  Bundle b{cfg, dir, m};

  const bool needs_ground = cfg.get("datum.kind") == "ground" || name != "morawetz-verify";
  std::optional<GroundState> gs;
  if (needs_ground) {
    gs = ground_state_for(cfg);
    m.results["ground.m_omega"] = gs->m_omega;
    m.results["ground.pohozaev_residual"] = gs->pohozaev_residual;
  }
  const FieldState u0 = datum_from(cfg, gs ? &*gs : nullptr);
  write_snapshot(dir / "initial.nls", u0);
  m.add_file(dir, "initial.nls", "snapshot");

  const auto tr = evolve(u0, cfg.get_double("evolve.t_end"), params, policy_from(cfg));
  m.termination = to_string(tr.termination);
  if (!tr.message.empty()) m.notes["termination.message"] = tr.message;
  if (tr.tainted) m.results["taint_time"] = tr.taint_time;
  m.steps = tr.step_log.size();
  m.samples = tr.size();
  write_trajectory_csv(dir / "trajectory.csv", tr, gs ? gs->m_omega : 0.0);
  b.csv("trajectory.csv");
  write_steps_csv(dir / "steps.csv", tr);
  b.csv("steps.csv");
  if (tr.size() > 0 && tr.samples.back().state) {
    write_snapshot(dir / "final.nls", tr.state(tr.size() - 1));
    m.add_file(dir, "final.nls", "snapshot");
  }
  const auto& r0 = tr.reports.front();
  const auto& r1 = tr.reports.back();
  m.results["mass.drift"] = std::abs(r1.mass - r0.mass) / r0.mass;
  m.results["energy.drift"] = std::abs(r1.energy - r0.energy) / std::max(std::abs(r0.energy), 1e-300);

  if (name == "aplus-scatter") {
    aplus_bundle(b, tr, *gs, true);
    scattering_bundle(b, tr);
    virial_bundle(b, tr, VirialKind::Quadratic, 0);
  } else if (name == "coercivity-scan") {
    aplus_bundle(b, tr, *gs, true);
    const auto rg = report(gs->state(), params);
    m.results["ground.global_ratio"] = rg.pohozaev / rg.kinetic;
    b.check("standing_wave_ratio", std::abs(rg.pohozaev / rg.kinetic) < 1e-4,
            "G/K of the ground state " + fmt(rg.pohozaev / rg.kinetic));
  } else if (name == "aminus-radial-blowup") {
    blowup_bundle(b, tr, *gs, RateSymmetry::Radial);
    virial_bundle(b, tr, VirialKind::RadialRho, cfg.get_double("diag.rho"));
  } else if (name == "aminus-cylindrical-blowup") {
    blowup_bundle(b, tr, *gs, RateSymmetry::Cylindrical);
    virial_bundle(b, tr, VirialKind::CylindricalRho, cfg.get_double("diag.rho"));
  } else if (name == "standing-wave") {
    CsvWriter w(dir / "standing_wave.csv", schema::standing_wave);
    const auto psi = gs->state();
    double scale = 0;
    for (const auto& z : psi.values) scale = std::max(scale, std::abs(z));
    double last = 0, first_exceed = -1;
    const double tol = cfg.get_double("diag.tolerance");
    for (std::size_t i = 0; i < tr.size(); ++i) {
      const auto u = tr.state(i);
      const cplx ph = std::polar(1.0, params.omega * u.time);
      double e = 0;
      for (std::size_t j = 0; j < u.size(); ++j) e = std::max(e, std::abs(u.values[j] - ph * psi.values[j]));
      w.row(std::vector<double>{u.time, e, e / scale});
      if (e >= tol && first_exceed < 0) first_exceed = u.time;
      last = e;
    }
    w.close();
    b.csv("standing_wave.csv");
    m.results["standing_wave.final_error"] = last;
    m.results["standing_wave.first_exceed_time"] = first_exceed;
    b.check("standing_wave", tr.termination == Termination::ReachedT && last < tol,
            "max |u - e^{i omega t} psi| at t_end " + fmt(last) +
                " (the ground state is linearly unstable; splitting error grows exponentially)");
  } else if (name == "small-data") {
    aplus_bundle(b, tr, *gs, false);
    scattering_bundle(b, tr);
    InteractionOptions io;
    io.r_lo = cfg.get_double("diag.r_lo");
    io.r_hi = cfg.get_double("diag.r_hi");
    io.n_r = cfg.get_int("diag.n_r");
    const double T = tr.final_time();
    io.t_lo = 0;
    io.t_hi = T / 3;
    const auto early = averaged_interaction(tr, io);
    io.t_lo = 2 * T / 3;
    io.t_hi = T;
    const auto late = averaged_interaction(tr, io);
    m.results["interaction.early"] = early.value;
    m.results["interaction.late"] = late.value;
  } else if (name == "morawetz-verify") {
    const auto fam = build_cutoff_profile(cfg.get_double("diag.eta"), cfg.get_double("diag.radius"), params.p, params.q);
    MorawetzOptions mo;
    mo.flip_term4_sign = cfg.get_int("diag.flip_term4") != 0;
    const auto ms = morawetz_series(tr, fam, mo);
    write_morawetz_csv(dir / "morawetz.csv", ms);
    b.csv("morawetz.csv");
    m.results["morawetz.identity_residual"] = ms.max_identity_residual;
    m.results["morawetz.bound_constant"] = ms.bound_constant;
    const double tol = cfg.get_double("diag.tolerance");
    b.check("morawetz_identity", ms.max_identity_residual < tol,
            "max identity residual " + fmt(ms.max_identity_residual));
  }

  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  write_manifest(dir / "manifest.json", m);
  return m;
}

double replay_manifest(const std::filesystem::path& manifest, const std::filesystem::path& out_dir) {
  const auto m = read_manifest(manifest);
  const auto bad = verify_manifest(manifest, m);
  if (!bad.empty()) fail(ErrorKind::Format, "manifest no longer matches its files: " + bad.front());
  run_scenario(m.preset, {}, out_dir, m.config);
  const auto a = read_csv(manifest.parent_path() / "trajectory.csv");
  const auto b = read_csv(out_dir / m.preset / "trajectory.csv");
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (const auto& col : a.header) {
    if (col == "membership") continue;
    const auto x = a.column(col), y = b.column(col);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = std::abs(x[i] - y[i]), s = std::max(std::abs(x[i]), std::abs(y[i]));
      if (d > 0) worst = std::max(worst, d / std::max(s, 1e-300));
    }
  }
  return worst;
}

}  // namespace nls
