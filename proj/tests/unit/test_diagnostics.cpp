#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nls/core/all.hpp"
#include "nls/diagnostics/boost.hpp"
#include "nls/diagnostics/coercivity.hpp"
#include "nls/diagnostics/exponents.hpp"
#include "nls/diagnostics/invariance.hpp"
#include "nls/diagnostics/morawetz.hpp"
#include "nls/diagnostics/rates.hpp"
#include "nls/diagnostics/virial.hpp"
#include "nls/diagnostics/windows.hpp"
#include "nls/evolution/evolve.hpp"
#include "nls/evolution/stepper.hpp"
#include "nls/functionals/report.hpp"
#include "nls/variational/ground_state.hpp"
#include "nls/variational/scaling.hpp"

using namespace nls;

namespace {

const PhysParams kBase = PhysParams::make(3, 2.5, 1, Regime::Scattering);

double norm3(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

// e^{−|x−c|²/(2w²)} with an optional chirp e^{iβ|x−c|²}
FieldState bump(const CartesianGrid& g, Vec3 c, double w, double chirp = 0.0, double amp = 1.0) {
  return FieldState::sample(g, [=](const Vec3& x) {
    const double r2 = (x[0] - c[0]) * (x[0] - c[0]) + (x[1] - c[1]) * (x[1] - c[1]) + (x[2] - c[2]) * (x[2] - c[2]);
    return std::polar(amp * std::exp(-r2 / (2 * w * w)), chirp * r2);
  });
}

FieldState add(FieldState a, const FieldState& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.values[i] += b.values[i];
  return a;
}

const GroundState& ground_state_on(double r_max, int m) {
  static std::map<std::pair<double, int>, GroundState> cache;
  auto it = cache.find({r_max, m});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(r_max, m), ground_state_shooting(kBase, RadialGrid(r_max, m))).first;
  return it->second;
}

const Trajectory& blowup_run() {
  static const Trajectory tr = [] {
    StepPolicy pol;
    pol.blowup_factor = 10;
    pol.sample_interval = 0.004;
    return evolve(rescale(ground_state_on(30, 65535).state(), 1.2), 1.0, kBase, pol);
  }();
  return tr;
}

const Trajectory& aplus_run() {
  static const Trajectory tr = [] {
    StepPolicy pol;
    pol.sample_interval = 0.25;
    return evolve(rescale(ground_state_on(30, 16383).state(), 0.8), 1.0, kBase, pol);
  }();
  return tr;
}

// Small radial Gaussian: the nonlinearity is negligible and the solution disperses.
const Trajectory& small_data_run() {
  static const Trajectory tr = [] {
    RadialGrid g(60.0, 3071);
    StepPolicy pol;
    pol.dt_max = 0.01;
    pol.sample_interval = 0.5;
    return evolve(FieldState::sample(g, [](double r) { return cplx(0.05 * std::exp(-r * r / 2)); }), 6.0,
                  kBase, pol);
  }();
  return tr;
}

}  // namespace

// ---------------------------------------------------------------- exponents

TEST_CASE("exponent table at p = 3") {
  const auto t = exponent_table(3.0, 2.5);
  CHECK(t.a1 == doctest::Approx(8.0 / 3).epsilon(1e-15));
  CHECK(t.b1 == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(t.m1 == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(t.n1 == doctest::Approx(8.0 / 5).epsilon(1e-15));
  CHECK(t.r1 == doctest::Approx(12.0 / 5).epsilon(1e-15));
  CHECK(t.sigma1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(2 / t.a1 + 3 / t.b1 == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(t.max_residual() < 1e-15);
  CHECK(t.theta_34 > 0);
  CHECK(t.theta_34 < 1);
  CHECK(t.theta_35 > 0);
  CHECK(t.theta_35 < 1);
  CHECK(t.theta_34 == doctest::Approx((3 * 2.5 - 7) * 2 / ((9.0 - 7) * 1.5)));
  CHECK(t.theta_35 == doctest::Approx((3 * 3 * 2.5 - 3 * 2.5 - 12) / (2.5 * 2)));
}

TEST_CASE("exponent identities for random scattering-regime exponents") {
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 50; ++k) {
    const double q = 7.0 / 3 + 1e-3 + U(rng) * (5 - 7.0 / 3 - 2e-3);
    const double p = q + 1e-4 + U(rng) * (5 - 1e-4 - q - 1e-4);
    const auto t = strichartz_table(PhysParams::make(p, q, 1.0, Regime::Scattering));
    CHECK(t.max_residual() < 1e-12);
    CHECK(t.interpolation_in_range());
  }
}

TEST_CASE("exponent table: degenerate q = p and regime guard") {
  const auto t = exponent_table(3.5, 3.5);
  CHECK(t.a1 == t.a2);
  CHECK(t.b1 == t.b2);
  CHECK(t.m1 == t.m2);
  CHECK(t.n1 == t.n2);
  CHECK(t.r1 == t.r2);
  CHECK(t.sigma1 == t.sigma2);
  PhysParams bad = kBase;
  bad.q = 2.0;
  bad.regime = Regime::General;
  CHECK_THROWS_AS(strichartz_table(bad), Error);
  CHECK(exponent_csv_header() == "name,value");
  CHECK(to_csv_rows(exponent_table(3, 2.5)).size() > 12);
}

// ---------------------------------------------------------------- boost

TEST_CASE("galilean boost: invariants and the kinetic identity") {
  CartesianGrid g(64, 16);
  const auto u = add(bump(g, {1, 0, 0}, 1.0, 0.2), bump(g, {-1.5, 1, 0.5}, 0.8, -0.1, 0.7));
  const auto same = galilean_boost(u, {0, 0, 0});
  CHECK(same.snap_distance == 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) REQUIRE(same.state.values[i] == u.values[i]);

  const Vec3 xi{0.9, -0.4, 0.3};
  const auto b = galilean_boost(u, xi);
  CHECK(b.snap_distance <= std::sqrt(3.0) / 2 * 2 * std::numbers::pi / 16 + 1e-15);
  const auto r0 = report(u, kBase), r1 = report(b.state, kBase);
  CHECK(std::abs(r1.mass - r0.mass) < 1e-14 * r0.mass);
  CHECK(std::abs(r1.lp - r0.lp) < 1e-14 * r0.lp);
  CHECK(std::abs(r1.lq - r0.lq) < 1e-14 * r0.lq);
  CHECK(std::abs(lebesgue_norm(b.state, 7.3) - lebesgue_norm(u, 7.3)) < 1e-14);
  double expect = r0.kinetic;
  for (int a = 0; a < 3; ++a) expect += 2 * b.xi[a] * r0.momentum[a] + b.xi[a] * b.xi[a] * r0.mass;
  CHECK(std::abs(r1.kinetic - expect) < 1e-10 * expect);

  RadialGrid rg(10, 64);
  CHECK_THROWS_AS(galilean_boost(FieldState(rg), xi), Error);
}

TEST_CASE("optimal xi: zero, real and boosted states") {
  CartesianGrid g(64, 16);
  const auto fam = build_cutoff_profile(0.5, 3.0, kBase.p, kBase.q);
  const auto real = bump(g, {0, 0, 0}, 2.0);
  const Vec3 zero = optimal_xi(real, fam, {0.5, 0, 0});
  CHECK(norm3(zero) < 1e-14);

  const Vec3 v = snap_to_lattice(g, {0.8, -0.4, 1.2}).xi;
  const auto moving = galilean_boost(real, v).state;
  const Vec3 xi = optimal_xi(moving, fam, {0, 0, 0});
  for (int a = 0; a < 3; ++a) CHECK(std::abs(xi[a] + v[a]) < 1e-3);

  // boost covariance
  const auto u = bump(g, {0.5, 0, 0}, 1.5, 0.15);
  const Vec3 x0 = optimal_xi(u, fam, {1, 0, 0});
  const Vec3 x1 = optimal_xi(galilean_boost(u, v).state, fam, {1, 0, 0});
  // exact up to the spectral wrap-around of the shifted modes
  for (int a = 0; a < 3; ++a) CHECK(std::abs(x1[a] - (x0[a] - v[a])) < 1e-9);

  // nothing under the cutoff: the zero branch
  const auto far = bump(g, {-6, -6, -6}, 0.3);
  const Vec3 none = optimal_xi(far, fam, {3, 3, 3});
  CHECK(norm3(none) == 0.0);
}

TEST_CASE("localized Pohozaev: product rule against direct evaluation") {
  CartesianGrid g(128, 16);
  const auto u = bump(g, {0, 0, 0}, 1.0, 0.3);
  const auto fam = build_cutoff_profile(0.9, 4.0, kBase.p, kBase.q);
  const Localizer loc(u, kBase.p, kBase.q);
  for (const Vec3 z : {Vec3{0, 0, 0}, Vec3{1, 0.5, 0}, Vec3{2, 2, 1}}) {
    const auto li = loc.at(fam, z);
    const Vec3 xi = snap_to_lattice(g, optimal_xi(li, loc.total_mass())).xi;
    const auto product = localized_pohozaev(li, xi, kBase);
    const auto direct = localized_pohozaev(u, fam, z, xi, kBase);
    CHECK(std::abs(product.grad_sq_loc - direct.grad_sq_loc) < 1e-8 * direct.grad_sq_loc);
    CHECK(std::abs(product.g_loc - direct.g_loc) < 1e-8 * direct.grad_sq_loc);
  }
  const auto zero = localized_pohozaev(FieldState(g), fam, {0, 0, 0}, {0, 0, 0}, kBase);
  CHECK(zero.sentinel());
}

TEST_CASE("localizer: radial backend matches the Cartesian one") {
  auto f = [](double r) { return std::polar(std::exp(-r * r / 2), 0.3 * r * r); };
  CartesianGrid cg(128, 16);
  const auto cs = FieldState::sample(cg, [&](const Vec3& x) { return f(norm3(x)); });
  const auto rs = FieldState::sample(RadialGrid(30, 6000), f);
  const Localizer lc(cs, kBase.p, kBase.q), lr(rs, kBase.p, kBase.q);
  CHECK(lr.radial());
  const auto fam = build_cutoff_profile(0.9, 4.0, kBase.p, kBase.q);
  for (const Vec3 z : {Vec3{0, 0, 0}, Vec3{1, 0.5, 0}, Vec3{2, 2, 1}, Vec3{0, 0, 4}}) {
    const auto a = lc.at(fam, z), b = lr.at(fam, z);
    CHECK(std::abs(a.mass - b.mass) < 1e-7 * a.mass);
    CHECK(std::abs(a.kinetic - b.kinetic) < 1e-7 * a.kinetic);
    CHECK(std::abs(a.lq - b.lq) < 1e-6 * a.lq);
    CHECK(std::abs(a.lp - b.lp) < 1e-6 * a.lp);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a.current[k] - b.current[k]) < 1e-7 * (norm3(a.current) + a.mass));
  }
}

// ---------------------------------------------------------------- coercivity

TEST_CASE("coercivity scan separates A+ data from the ground state") {
  const auto& tr = aplus_run();
  REQUIRE(tr.termination == Termination::ReachedT);
  CoercivityOptions opt;
  opt.sample_stride = 2;
  const auto scan = coercivity_scan(tr, opt);
  CHECK_FALSE(scan.vacuous);
  CHECK(scan.delta_hat > 0.1);
  CHECK(scan.evaluations > 0);
  CHECK(scan.min_per_radius.size() == 3);
  MESSAGE("A+ delta_hat = " << scan.delta_hat << " monotone = " << scan.monotone);

  const auto& gs = ground_state_on(30, 16383);
  const auto r = report(gs.state(), kBase);
  CHECK(std::abs(r.pohozaev / r.kinetic) < 1e-4);
  const auto wave = coercivity_scan(std::vector<FieldState>{gs.state()}, kBase, opt);
  CHECK(wave.delta_hat < 1e-3);
  CHECK(wave.delta_hat < 0.1 * scan.delta_hat);
}

TEST_CASE("coercivity scan: vacuous and degenerate inputs") {
  CartesianGrid g(16, 16);
  CoercivityOptions opt;
  opt.radii = {4.0};
  const auto empty = coercivity_scan(std::vector<FieldState>{FieldState(g)}, kBase, opt);
  CHECK(empty.vacuous);
  CHECK(std::isinf(empty.delta_hat));
  opt.mass_floor = 2.0;  // no point can hold more than the total mass
  CHECK_THROWS_AS(coercivity_scan(std::vector<FieldState>{bump(g, {0, 0, 0}, 1.0)}, kBase, opt), Error);
}

TEST_CASE("averaged interaction: trends, stride stability and the budget") {
  const auto& tr = small_data_run();
  REQUIRE(tr.termination == Termination::ReachedT);
  InteractionOptions opt;
  opt.t_lo = 0;
  opt.t_hi = 2;
  const auto early = averaged_interaction(tr, opt);
  opt.t_lo = 4;
  opt.t_hi = 6;
  const auto late = averaged_interaction(tr, opt);
  CHECK(early.value > 0);
  CHECK(late.value < early.value);
  MESSAGE("averaged interaction early " << early.value << " late " << late.value);

  opt.stride_factor = 0.125;
  const auto fine = averaged_interaction(tr, opt);
  CHECK(std::abs(fine.value - late.value) < 0.1 * late.value);

  CartesianGrid g(16, 16);
  opt = {};
  const auto zero = averaged_interaction({0.0}, {FieldState(g)}, kBase, opt);
  CHECK(zero.value == 0.0);
  opt.budget = 10;
  CHECK_THROWS_AS(averaged_interaction({0.0}, {bump(g, {0, 0, 0}, 1)}, kBase, opt), Error);
}

// ---------------------------------------------------------------- Morawetz

TEST_CASE("Morawetz: convolution evaluation equals the direct double sum") {
  CartesianGrid g(16, 12);
  const auto u = add(bump(g, {2, 0, 0}, 1.0, 0.1), bump(g, {-2, 0, 0.5}, 1.0, -0.2, 0.8));
  const auto fam = build_cutoff_profile(0.5, 4.0, kBase.p, kBase.q);
  const MorawetzEvaluator ev(g, fam);
  const auto d = morawetz_direct(u, fam, kBase);
  const double m = ev.action(u);
  CHECK(std::abs(m - d.action) < 1e-9 * std::abs(d.action));
  const auto t = ev.terms(u, kBase);
  for (int k = 0; k < 5; ++k) CHECK(std::abs(t.term[k] - d.terms.term[k]) < 1e-9 * std::abs(d.terms.term[k]));
}

TEST_CASE("Morawetz: real states carry no action") {
  CartesianGrid g(32, 16);
  const auto u = add(bump(g, {2, 0, 0}, 1.0), bump(g, {-2, 0, 0}, 1.0));
  const auto fam = build_cutoff_profile(0.5, 4.0, kBase.p, kBase.q);
  CHECK(std::abs(morawetz_action(u, fam)) < 1e-12);
  CHECK(std::abs(morawetz_derivative_terms(u, fam, kBase).term[0]) < 1e-12);
}

TEST_CASE("Morawetz: identity against the time derivative, and the sign mutation") {
  CartesianGrid g(32, 16);
  auto u = FieldState::sample(g, [](const Vec3& x) {
    const double a = (x[0] - 2) * (x[0] - 2) + x[1] * x[1] + x[2] * x[2];
    const double b = (x[0] + 2) * (x[0] + 2) + x[1] * x[1] + (x[2] - 0.5) * (x[2] - 0.5);
    return std::polar(std::exp(-a / 2), -0.7 * x[0]) + std::polar(0.8 * std::exp(-b / 2), 0.6 * x[0] + 0.2 * x[1]);
  });
  const auto fam = build_cutoff_profile(0.5, 4.0, kBase.p, kBase.q);
  const double dt = 1e-3;
  std::vector<FieldState> states{strang_step(u, -dt, kBase), u, strang_step(u, dt, kBase)};
  states[0].time = -dt;
  states[2].time = dt;
  const auto series = morawetz_series(states, fam, kBase);
  REQUIRE(series.samples[1].interior);
  CHECK(series.max_identity_residual < 1e-2);
  MESSAGE("Morawetz identity residual " << series.max_identity_residual);
  MorawetzOptions flip;
  flip.flip_term4_sign = true;
  CHECK(morawetz_series(states, fam, kBase, flip).max_identity_residual > 1e-2);
}

TEST_CASE("Morawetz: |M| grows linearly in R with a stable constant") {
  CartesianGrid g(64, 96);
  const auto u = add(galilean_boost(bump(g, {24, 0, 0}, 2.0), {-0.5, 0, 0}).state,
                     galilean_boost(bump(g, {-24, 0, 0}, 2.0), {0.5, 0, 0}).state);
  std::vector<double> c;
  for (double R : {4.0, 8.0, 16.0}) c.push_back(std::abs(morawetz_action(u, build_cutoff_profile(0.5, R, 3, 2.5))) / R);
  for (double v : c) CHECK(std::abs(v - c[0]) < 0.2 * c[0]);
  CHECK(c[0] > 0);
}

TEST_CASE("Morawetz: radial trajectories are rejected") {
  const auto& tr = small_data_run();
  CHECK_THROWS_AS(morawetz_series(tr, build_cutoff_profile(0.5, 4.0, 3, 2.5)), Error);
}

// ---------------------------------------------------------------- virial

TEST_CASE("virial: quadratic weight, identity and finite differences in time") {
  CartesianGrid g(32, 16);
  const auto u0 = bump(g, {0.3, 0, 0}, 1.0, 0.1);
  StepPolicy pol;
  pol.dt_max = 1e-3;
  pol.sample_interval = 0.01;
  const auto tr = evolve(u0, 0.2, kBase, pol);
  REQUIRE(tr.termination == Termination::ReachedT);
  const auto w = build_virial_weight(VirialKind::Quadratic, 0, g);
  const auto s = virial_series(tr, w);
  CHECK(virial_identity_residual(s) < 1e-3);
  for (double v : s.v) CHECK(v >= 0);
  const auto fine = virial_fd_check(s, 1), coarse = virial_fd_check(s, 2);
  CHECK(fine.second < 1e-2);
  CHECK(fine.first < 1e-3);
  CHECK(coarse.second / fine.second > 3.0);
  CHECK(coarse.second / fine.second < 5.0);

  const auto est = virial_estimate_check(s, s, kBase);
  CHECK(est.constant == 0.0);
  for (std::size_t i = 0; i < est.slack.size(); ++i) CHECK(std::abs(est.slack[i]) < 1e-10 * std::abs(8 * s.g_pohozaev[i]));
}

TEST_CASE("virial: V is constant along the standing wave") {
  const auto& gs = ground_state_on(30, 8191);
  StepPolicy pol;
  pol.dt_max = 5e-5;
  pol.sample_interval = 0.01;
  const auto tr = evolve(gs.state(), 0.05, kBase, pol);
  const auto s = virial_series(tr, build_virial_weight(VirialKind::RadialRho, 2.0, tr.grid()));
  for (double v : s.v) CHECK(std::abs(v - s.v[0]) < 1e-6 * s.v[0]);
}

TEST_CASE("virial: localized estimate on the radial blow-up run") {
  const auto& tr = blowup_run();
  REQUIRE(tr.termination == Termination::BlowupThreshold);
  const auto scale = std::abs(8 * tr.reports.back().pohozaev);
  const auto w = build_virial_weight(VirialKind::RadialRho, 10.0, tr.grid());
  const auto est = virial_estimate_check(tr, w);
  CHECK(std::isfinite(est.constant));
  CHECK(est.min_slack >= -1e-12 * scale);
  // a narrow weight makes the correction visible
  const auto narrow = virial_estimate_check(tr, build_virial_weight(VirialKind::RadialRho, 0.5, tr.grid()));
  CHECK(narrow.constant > 0);
  CHECK(narrow.min_slack >= -1e-12 * scale);
}

TEST_CASE("virial: symmetry mismatch is a domain error") {
  CartesianGrid g(16, 16);
  Trajectory tr(g, kBase);
  FieldState s = bump(g, {0, 0, 0}, 1.0);
  tr.add_sample(Sample{0.0, s, {}, 0, 0}, report(s, kBase));
  CHECK_THROWS_AS(virial_estimate_check(tr, build_virial_weight(VirialKind::RadialRho, 4.0, g)), Error);
  const auto& rt = small_data_run();
  CHECK_THROWS_AS(build_virial_weight(VirialKind::CylindricalRho, 4.0, rt.grid()), Error);
  // the unlocalized weight fits any symmetry and needs no correction
  CHECK(virial_estimate_check(rt, build_virial_weight(VirialKind::Quadratic, 0, rt.grid())).constant == 0.0);
}

// ---------------------------------------------------------------- rates

TEST_CASE("rates: predicted exponents") {
  CHECK(predicted_rate_exponent(3, RateSymmetry::Radial) == doctest::Approx(2.0 / 3));
  CHECK(predicted_gradient_exponent(3, RateSymmetry::Radial) == doctest::Approx(2.0 / 3));
  CHECK(predicted_rate_exponent(2.8, RateSymmetry::Cylindrical) == doctest::Approx(4.0 / 11));
  CHECK(predicted_gradient_exponent(2.8, RateSymmetry::Cylindrical) == doctest::Approx(1.8 / 2.2));
  CHECK_THROWS_AS(predicted_rate_exponent(3.0, RateSymmetry::Cylindrical), Error);
  CHECK(parse_rate_symmetry("radial") == RateSymmetry::Radial);
  CHECK_THROWS_AS(parse_rate_symmetry("spherical"), Error);
}

TEST_CASE("rates: synthetic gradient series recover the closed-form g") {
  for (const auto& [p, sym] : {std::pair{3.0, RateSymmetry::Radial}, std::pair{2.8, RateSymmetry::Cylindrical}}) {
    const double e = predicted_rate_exponent(p, sym), T = 0.7;
    // ‖∇u‖² = (T−τ)^{e−2} gives g = (T−t)^e / e
    std::vector<double> t, k;
    for (int i = 0; i <= 400; ++i) {
      const double tau = T * std::pow(1e-6, i / 400.0);
      t.push_back(T - tau);
      k.push_back(std::pow(tau, e - 2));
    }
    const auto fit = rate_fit(t, k, p, sym);
    CHECK(fit.t_star == doctest::Approx(T).epsilon(1e-6));
    CHECK(std::abs(fit.exponent_fitted - e) < 1e-2);
    CHECK(fit.max_ratio_drift < 1.05);
    CHECK(fit.constant_fitted == doctest::Approx(1 / e).epsilon(1e-2));
  }
}

TEST_CASE("rates: radial blow-up run stays within the upper bound") {
  const auto& tr = blowup_run();
  const auto fit = blowup_rate_check(tr, RateSymmetry::Radial);
  CHECK(fit.exponent_predicted == doctest::Approx(2.0 / 3));
  CHECK(fit.max_ratio_drift < 3.0);
  CHECK(fit.min_ratio_drift < 3.0);
  CHECK(fit.exponent_fitted > fit.exponent_predicted);
  CHECK(fit.gradient_bound_consistent);
  CHECK(fit.t_star > tr.final_time());
  CHECK_THROWS_AS(blowup_rate_check(tr, RateSymmetry::Cylindrical), Error);
  CHECK_THROWS_AS(blowup_rate_check(small_data_run(), RateSymmetry::Radial), Error);
}

// ---------------------------------------------------------------- windows

TEST_CASE("window norms: zero, constant modulus and dispersion") {
  const auto table = strichartz_table(kBase);
  CartesianGrid g(16, 16);
  std::vector<double> times;
  std::vector<FieldState> zeros;
  for (int i = 0; i <= 8; ++i) {
    times.push_back(0.1 * i);
    zeros.emplace_back(g, 0.1 * i);
  }
  CHECK(scattering_window_norm(times, zeros, 0, 0.8, table).value == 0.0);

  const auto psi = ground_state_on(30, 8191).state();
  std::vector<FieldState> wave;
  for (double t : times) {
    FieldState s = psi;
    for (auto& v : s.values) v *= std::polar(1.0, t);
    s.time = t;
    wave.push_back(s);
  }
  const auto w = scattering_window_norm(times, wave, 0, 0.8, table);
  CHECK(w.value == doctest::Approx(std::pow(0.8, 1 / table.m1) * lebesgue_norm(psi, table.b1)).epsilon(1e-12));
  CHECK_FALSE(w.low_resolution);
  CHECK(scattering_window_norm(times, wave, 0, 0.4, table).low_resolution);

  const auto& tr = small_data_run();
  const auto early = scattering_window_norm(tr, 0, 2, table), late = scattering_window_norm(tr, 4, 6, table);
  CHECK(late.value < early.value);
}

// ---------------------------------------------------------------- invariance

TEST_CASE("set invariance along A+ and A- runs") {
  const auto& plus = aplus_run();
  const double m_plus = ground_state_on(30, 16383).m_omega;
  const auto a = check_aplus_invariance(plus, m_plus);
  CHECK(a.holds);
  CHECK(a.min_slack > 0);
  CHECK(a.action_gap > 0);

  const auto& minus = blowup_run();
  const double m_minus = ground_state_on(30, 65535).m_omega;
  const auto b = check_aminus_invariance(minus, m_minus);
  CHECK(b.holds);
  CHECK(b.delta_max > 0);
  CHECK(b.worst_relative >= -1e-3);
  CHECK_FALSE(check_aplus_invariance(minus, m_minus).holds);
  CHECK_FALSE(check_aminus_invariance(plus, m_plus).holds);
}
