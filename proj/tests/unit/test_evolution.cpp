#include <cmath>
#include <filesystem>
#include <map>
#include <numbers>

#include "doctest.h"
#include "nls/core/all.hpp"
#include "nls/evolution/detect.hpp"
#include "nls/evolution/evolve.hpp"
#include "nls/evolution/stepper.hpp"
#include "nls/functionals/report.hpp"
#include "nls/variational/ground_state.hpp"
#include "nls/variational/scaling.hpp"

using namespace nls;

namespace {

const PhysParams kBase = PhysParams::make(3, 2.5, 1, Regime::Scattering);

FieldState gaussian(const CartesianGrid& g, double a = 1.0) {
  return FieldState::sample(g, [=](const Vec3& x) {
    return cplx(a * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])));
  });
}

FieldState radial_gaussian(const RadialGrid& g, double a = 1.0) {
  return FieldState::sample(g, [=](double r) { return cplx(a * std::exp(-r * r)); });
}

// e^{itΔ}e^{−|x|²} = (1 + 4it)^{−3/2} exp(−|x|²/(1 + 4it))
cplx free_gaussian(double r, double t) {
  const cplx s(1.0, 4.0 * t);
  return std::pow(s, -1.5) * std::exp(-r * r / s);
}

double max_diff(const CField& a, const CField& b) {
  double e = 0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

double norm_l2(const CField& a) {
  double s = 0;
  for (const auto& z : a) s += std::norm(z);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("zero state is a fixed point") {
  CartesianGrid g(16, 10.0);
  FieldState z(g);
  const auto out = strang_step(z, 0.01, kBase);
  CHECK(max_abs(out.values) == 0.0);
  CHECK(out.time == doctest::Approx(0.01));
  CHECK_THROWS_AS(strang_step(z, 0.0, kBase), Error);
}

TEST_CASE("plane wave picks up the exact phase") {
  CartesianGrid g(16, 2 * std::numbers::pi);
  const double A = 0.7;
  const Vec3 k{1, 2, -1};
  auto s = FieldState::sample(g, [&](const Vec3& x) {
    return A * std::polar(1.0, k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
  });
  const double freq = 6.0 + std::pow(A, kBase.q - 1) - std::pow(A, kBase.p - 1);
  const double dt = 0.01;
  FieldState u = s;
  for (int i = 0; i < 100; ++i) u = strang_step(u, dt, kBase);
  CField expect = s.values;
  for (auto& z : expect) z *= std::polar(1.0, -freq * 1.0);
  CHECK(max_diff(u.values, expect) < 1e-12);
}

TEST_CASE("one step conserves mass to roundoff") {
  CartesianGrid g(32, 16.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto s = random_smooth_state(g, seed);
    const auto out = strang_step(s, 0.01, kBase);
    CHECK(std::abs(mass(out) - mass(s)) / mass(s) < 1e-14);
  }
}

TEST_CASE("free propagator: identity, group law, Gaussian oracle") {
  CartesianGrid g(64, 20.0);
  const auto s = gaussian(g);
  CHECK(max_diff(free_evolve(s, 0.0).values, s.values) == 0.0);
  const auto ab = free_evolve(free_evolve(s, 0.13), 0.29);
  const auto c = free_evolve(s, 0.42);
  CHECK(max_diff(ab.values, c.values) < 1e-13);
  CHECK(std::abs(mass(c) - mass(s)) / mass(s) < 1e-14);
  double err = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Vec3 x = g.position(i);
    err = std::max(err, std::abs(c.values[i] - free_gaussian(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]), 0.42)));
  }
  CHECK(err < 1e-10);

  RadialGrid rg(40.0, 4095);
  const auto rs = radial_gaussian(rg);
  const auto rc = free_evolve(rs, 0.42);
  double rerr = 0;
  for (std::size_t j = 0; j < rc.size(); ++j)
    rerr = std::max(rerr, std::abs(rc.values[j] - free_gaussian(rg.r(j), 0.42)));
  CHECK(rerr < 1e-10);
  CHECK(max_diff(free_evolve(free_evolve(rs, 0.2), -0.2).values, rs.values) < 1e-13);
}

TEST_CASE("stepping conserves mass over a thousand steps and is reversible") {
  CartesianGrid g(32, 16.0);
  const auto s = random_smooth_state(g, 11);
  const SplitStepper st(g, kBase);
  CField u = s.values;
  const double m0 = mass(s);
  for (int i = 0; i < 1000; ++i) st.step(u, 1e-3);
  CHECK(std::abs(mass(FieldState(g, u, 1.0)) - m0) / m0 < 1e-12);
  for (int i = 0; i < 1000; ++i) st.step(u, -1e-3);
  CHECK(max_diff(u, s.values) / norm_l2(s.values) < 1e-10);
}

TEST_CASE("energy error is second order in dt") {
  RadialGrid g(20.0, 4095);
  const auto s = radial_gaussian(g, 1.5);
  const SplitStepper st(g, kBase);
  const double e0 = report(s, kBase, RadialKinetic::Sine).energy;
  auto drift = [&](double dt) {
    CField u = s.values;
    double worst = 0;
    for (int i = 0; i < int(std::lround(0.5 / dt)); ++i) {
      st.step(u, dt);
      const double e = report(FieldState(g, u, 0.0), kBase, RadialKinetic::Sine).energy;
      worst = std::max(worst, std::abs(e - e0));
    }
    return worst;
  };
  const double d1 = drift(0.01), d2 = drift(0.005);
  CHECK(d1 / d2 > 3.0);
  CHECK(d1 / d2 < 5.0);
}

TEST_CASE("radial and Cartesian propagators agree on radial data") {
  CartesianGrid cg(64, 10.0);
  RadialGrid rg(10.0, 512);  // dr = h/8, so Cartesian axis points are radial nodes
  const auto cs = gaussian(cg, 1.5);
  const auto rs = radial_gaussian(rg, 1.5);
  FieldState cu = cs, ru = rs;
  for (int i = 0; i < 100; ++i) {
    cu = strang_step(cu, 2e-3, kBase);
    ru = strang_step(ru, 2e-3, kBase);
  }
  double err = 0;
  for (int i = cg.n() / 2 + 1; i < cg.n() - 8; ++i) {
    const std::size_t ci = cg.index(i, cg.n() / 2, cg.n() / 2);
    const std::size_t rj = std::size_t(8 * (i - cg.n() / 2) - 1);
    CHECK(rg.r(rj) == doctest::Approx(cg.coord(i)));
    err = std::max(err, std::abs(cu.values[ci] - ru.values[rj]));
  }
  CHECK(err < 1e-7);
}

namespace {

const GroundState& ground_state_on(int m) {
  static std::map<int, GroundState> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, ground_state_shooting(kBase, RadialGrid(30.0, m))).first;
  return it->second;
}

double standing_wave_error(double dt, double t) {
  const auto& gs = ground_state_on(8191);
  const auto s = gs.state();
  StepPolicy pol;
  pol.dt_max = dt;
  pol.c_nl = 0;
  pol.sample_interval = t;
  const auto tr = evolve(s, t, kBase, pol);
  REQUIRE(tr.termination == Termination::ReachedT);
  const auto u = tr.state(tr.size() - 1);
  CField expect = s.values;
  for (auto& z : expect) z *= std::polar(1.0, kBase.omega * t);
  return max_diff(u.values, expect);
}

}  // namespace

TEST_CASE("ground state evolves as a standing wave until its instability takes over") {
  // The ground state is linearly unstable (growth rate ≈ 17 for these parameters), so the
  // O(dt²) splitting error is amplified; at t = 0.1 it is still below 1e-4.
  const double e1 = standing_wave_error(1e-4, 0.1), e2 = standing_wave_error(5e-5, 0.1);
  CHECK(e2 < 1e-4);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
}

TEST_CASE("evolve records samples on schedule") {
  RadialGrid g(20.0, 2047);
  const auto s = radial_gaussian(g);
  StepPolicy pol;
  pol.dt_max = 1e-2;
  pol.sample_interval = 0.1;
  std::vector<double> probed;
  const auto tr = evolve(s, 0.5, kBase, pol, {[&](const FieldState& st, const FunctionalReport& r) {
                           probed.push_back(st.time);
                           CHECK(r.time == st.time);
                         }});
  CHECK(tr.termination == Termination::ReachedT);
  REQUIRE(tr.size() == 6);
  CHECK(tr.reports.size() == tr.size());
  CHECK(probed.size() == tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.samples[i].time == doctest::Approx(0.1 * i).epsilon(1e-12));
  CHECK(tr.final_time() == 0.5);
  for (std::size_t i = 1; i < tr.step_log.size(); ++i) CHECK(tr.step_log[i].t > tr.step_log[i - 1].t);
  const double m0 = tr.reports.front().mass;
  CHECK(std::abs(tr.reports.back().mass - m0) / m0 < 1e-12);
  CHECK_FALSE(tr.tainted);
}

TEST_CASE("evolve guards: divergence, resolution, taint, spill") {
  RadialGrid g(6.0, 1023);
  StepPolicy pol;
  pol.dt_max = 1e-2;
  pol.sample_interval = 0.1;

  const auto huge = radial_gaussian(g, 1e200);
  pol.c_nl = 0;
  const auto d = evolve(huge, 1.0, kBase, pol);
  CHECK(d.termination == Termination::Diverged);
  CHECK(d.message.find("last good time 0") != std::string::npos);
  pol.c_nl = 0.1;

  const auto rough = FieldState::sample(g, [](double r) { return cplx(r < 1 ? 1.0 : 0.0); });
  CHECK(evolve(rough, 1.0, kBase, pol).termination == Termination::ResolutionLimit);

  const auto spread = evolve(radial_gaussian(g), 2.0, kBase, pol);
  CHECK(spread.tainted);
  CHECK(spread.taint_time > 0);

  const auto dir = std::filesystem::temp_directory_path() / "nls-evolution-test-spill";
  std::filesystem::remove_all(dir);
  StepPolicy sp = pol;
  sp.memory_budget = 2 * g.size() * sizeof(cplx);
  sp.spill_dir = dir;
  const auto a = evolve(radial_gaussian(g), 0.5, kBase, pol);
  const auto b = evolve(radial_gaussian(g), 0.5, kBase, sp);
  REQUIRE(a.size() == b.size());
  CHECK(b.samples[1].state.has_value());
  CHECK_FALSE(b.samples[2].state.has_value());
  CHECK(std::filesystem::exists(b.samples[2].file));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(max_diff(a.state(i).values, b.state(i).values) == 0.0);
  std::filesystem::remove_all(dir);

  StepPolicy lean = pol;
  lean.keep_states = false;
  const auto c = evolve(radial_gaussian(g), 0.2, kBase, lean);
  CHECK_THROWS_AS(c.state(1), Error);
  CHECK(c.reports.size() == 3);
}

TEST_CASE("power fit and synthetic blow-up recover the singular time") {
  const double T = 1.3;
  std::vector<double> t, mx, gr, inv;
  for (int i = 0; i < 400; ++i) {
    const double tau = 0.5 * std::pow(1e-4 / 0.5, i / 399.0);  // T − t from 0.5 down to 1e-4
    t.push_back(T - tau);
    gr.push_back(std::pow(tau, -2.0 / 3.0));
    mx.push_back(3.0 * std::pow(tau, -0.5));
    inv.push_back(1.0 / gr.back());
  }
  const auto f = fit_vanishing_power(t, inv);
  CHECK(f.t_star == doctest::Approx(T).epsilon(1e-6));
  CHECK(f.exponent == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  CHECK(f.coefficient == doctest::Approx(1.0).epsilon(1e-5));

  const auto e = estimate_blowup(t, mx, gr);
  CHECK(std::abs(e.t_star - T) / T < 1e-3);
  CHECK(std::abs(e.t_star_gradient - T) / T < 1e-3);
  CHECK(std::abs(e.t_star_max_abs - T) / T < 1e-3);
  CHECK(e.fit_max_abs.exponent == doctest::Approx(0.5).epsilon(1e-4));
  CHECK_FALSE(e.low_confidence);

  auto bumpy = gr;
  bumpy[bumpy.size() - 5] *= 0.9;
  CHECK(estimate_blowup(t, mx, bumpy).low_confidence);
  CHECK_THROWS_AS(fit_vanishing_power(std::vector<double>{0, 1}, std::vector<double>{1, 1}), Error);
}

TEST_CASE("blow-up run above the ground state") {
  const auto& gs = ground_state_on(65535);
  const auto s = rescale(gs.state(), 1.2);
  StepPolicy pol;
  pol.blowup_factor = 10;
  pol.sample_interval = 0.01;
  pol.keep_states = false;
  const auto tr = evolve(s, 1.0, kBase, pol);
  REQUIRE(tr.termination == Termination::BlowupThreshold);
  const double g0 = std::sqrt(tr.step_log.front().kinetic);
  CHECK(std::sqrt(tr.step_log.back().kinetic) > 10 * g0);
  for (std::size_t i = 1; i < tr.step_log.size(); ++i) CHECK(tr.step_log[i].kinetic >= tr.step_log[i - 1].kinetic);
  const auto e = detect_blowup(tr);
  CHECK(e.t_star > tr.final_time());
  CHECK(e.t_star < 1.0);
  CHECK(e.uncertainty > 0);
  CHECK(e.uncertainty < 1e-3 * e.t_star);
  CHECK_FALSE(e.low_confidence);
  CHECK(detect_scattering(tr).verdict == ScatterVerdict::NotApplicable);
}

TEST_CASE("detect_blowup requires a blow-up trajectory") {
  RadialGrid g(20.0, 2047);
  StepPolicy pol;
  pol.sample_interval = 0.05;
  const auto tr = evolve(radial_gaussian(g), 0.1, kBase, pol);
  CHECK_THROWS_AS(detect_blowup(tr), Error);
  // three samples: too short for a verdict
  CHECK(detect_scattering(tr).verdict == ScatterVerdict::Inconclusive);
}

TEST_CASE("scattering verdicts") {
  RadialGrid g(400.0, 32767);
  StepPolicy pol;
  pol.dt_max = 0.02;
  pol.sample_interval = 1.0;
  const auto small = evolve(radial_gaussian(g, 0.01), 20.0, kBase, pol);
  REQUIRE(small.termination == Termination::ReachedT);
  CHECK_FALSE(small.tainted);
  const auto v = detect_scattering(small);
  CHECK(v.verdict == ScatterVerdict::Scattering);
  CHECK(v.times.size() >= 4);
  CHECK(v.lp_last < v.lp_first);

  const auto& gs = ground_state_on(8191);
  StepPolicy sw;
  sw.dt_max = 1e-4;
  sw.sample_interval = 0.02;
  const auto wave = evolve(gs.state(), 0.3, kBase, sw);
  REQUIRE(wave.termination == Termination::ReachedT);
  const auto w = detect_scattering(wave);
  CHECK(w.verdict == ScatterVerdict::NotScattering);
  CHECK(w.increments.back() > 1e-2);
  CHECK(w.lp_last == doctest::Approx(w.lp_first).epsilon(1e-3));
}
