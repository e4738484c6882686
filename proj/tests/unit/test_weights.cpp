#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"
#include "nls/core/all.hpp"
#include "nls/weights/bridge.hpp"
#include "nls/weights/cutoff.hpp"
#include "nls/weights/virial_weight.hpp"

using namespace nls;

TEST_CASE("chi: plateau, support, monotone, derivative constant") {
  for (double eta : {0.05, 0.1, 0.2}) {
    CHECK(chi_profile(eta, 0.0).v == 1.0);
    CHECK(chi_profile(eta, 1.5).v == 0.0);
    CHECK(chi_profile(eta, 1.0 - eta).v == 1.0);
    double prev = 1.0;
    bool monotone = true;
    for (int i = 0; i <= 10000; ++i) {
      const double v = chi_profile(eta, 1.2 * i / 10000.0).v;
      monotone = monotone && v <= prev;
      prev = v;
    }
    CHECK(monotone);
    const double c = chi_derivative_constant(eta);
    CHECK(c <= 4.0);
    // the bridge slope peaks at its midpoint with value 2
    CHECK(c == doctest::Approx(2.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(chi_profile(0.0, 0.5), Error);
  CHECK_THROWS_AS(chi_profile(1.0, 0.5), Error);
}

TEST_CASE("bridge derivatives match finite differences") {
  for (double t : {0.1, 0.3, 0.5, 0.77, 0.93}) {
    const double h = 1e-5;
    const auto b = weights::bridge(t);
    const double fd1 = (weights::bridge(t + h).s - weights::bridge(t - h).s) / (2 * h);
    const double fd2 = (weights::bridge(t + h).ds - weights::bridge(t - h).ds) / (2 * h);
    CHECK(std::abs(b.ds - fd1) < 1e-7 * (1 + std::abs(b.ds)));
    CHECK(std::abs(b.d2s - fd2) < 1e-6 * (1 + std::abs(b.d2s)));
  }
}

TEST_CASE("cutoff profiles: table reproduces the direct convolution") {
  const CutoffProfiles prof(0.1, 3.0, 2.5);
  using W = CutoffProfiles::Which;
  double worst = 0, worst_d = 0;
  for (int i = 0; i < 200; ++i) {
    // off-node points
    const double y = 0.0037 + 1.99 * i / 200.0;
    const auto d = prof.direct(W::Phi, y);
    const auto t = prof.phi(y);
    worst = std::max(worst, std::abs(d.value - t.value));
    worst_d = std::max(worst_d, std::abs(d.derivative - t.derivative));
  }
  CHECK(worst < 1e-11);
  CHECK(worst_d < 1e-8);
  // Φ(0) = (1/ω₃)∫χ⁴ lies in (0, 1]
  const double phi0 = prof.phi(0.0).value;
  CHECK(phi0 > 0.0);
  CHECK(phi0 <= 1.0);
  // derivative from the closed form against a finite difference of the direct values
  const double y = 0.93, h = 1e-5;
  const double fd = (prof.direct(W::PhiP, y + h).value - prof.direct(W::PhiP, y - h).value) / (2 * h);
  CHECK(std::abs(fd - prof.direct(W::PhiP, y).derivative) < 1e-7);
}

TEST_CASE("cutoff profiles: indicator limit and unit mass of the overlap") {
  // ∫Φ dy over ℝ³ = (∫χ²)²/ω₃
  const double eta = 0.05;
  const CutoffProfiles prof(eta, 3.0, 2.5);
  using boost::math::quadrature::gauss_kronrod;
  auto shell = [&](double y) { return 4 * M_PI * y * y * prof.phi(y).value; };
  auto chi2 = [&](double s) {
    const double c = chi_profile(eta, s).v;
    return 4 * M_PI * s * s * c * c;
  };
  const double lhs = gauss_kronrod<double, 61>::integrate(shell, 0.0, 2.0, 15, 1e-13);
  const double m = gauss_kronrod<double, 61>::integrate(chi2, 0.0, 1.0, 15, 1e-14);
  CHECK(lhs == doctest::Approx(m * m / (4 * M_PI / 3)).epsilon(1e-9));
}

TEST_CASE("psi: tail is exactly C R/|x| and the gradient identity holds") {
  const auto fam = build_cutoff_profile(0.1, 8.0, 3.0, 2.5);
  const double C = fam.profiles->psi_tail_constant();
  for (double r = 4 * 8.0; r < 400; r *= 1.7) {
    CHECK(std::abs(fam.psi_at(r).value * r / (C * 8.0) - 1.0) < 0.02);
  }
  // ∂_rψ_R = (φ_R − ψ_R)/r against a finite difference of tabulated ψ_R
  double worst = 0;
  for (double r = 0.3; r < 30; r += 0.37) {
    const double h = 1e-4;
    const double fd = (fam.psi_at(r + h).value - fam.psi_at(r - h).value) / (2 * h);
    const double identity = (fam.phi_at(r).value - fam.psi_at(r).value) / r;
    worst = std::max(worst, std::abs(fd - identity));
  }
  CHECK(worst < 1e-4);

  // and on the Cartesian tabulation with a fourth-order stencil along x
  CartesianGrid g(128, 64.0);
  const auto tab = build_cutoff_family(0.2, 8.0, g, 3.0, 2.5);
  const double h = g.spacing();
  double worst_c = 0;
  const int c = g.n() / 2;
  for (int i = c + 2; i < g.n() - 2; ++i) {
    for (int j : {c, c + 3, c + 7}) {
      auto at = [&](int ii) { return tab.psi[g.index(ii, j, c + 1)]; };
      const double fd = (-at(i + 2) + 8 * at(i + 1) - 8 * at(i - 1) + at(i - 2)) / (12 * h);
      const Vec3 x = g.position(g.index(i, j, c + 1));
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      const std::size_t k = g.index(i, j, c + 1);
      const double identity = x[0] / r2 * (tab.phi[k] - tab.psi[k]);
      worst_c = std::max(worst_c, std::abs(fd - identity));
    }
  }
  CHECK(worst_c < 1e-4);
}

TEST_CASE("cutoff family: geometry guard and tabulated properties") {
  CartesianGrid g(64, 64.0);
  CHECK_THROWS_AS(build_cutoff_family(0.1, 9.0, g, 3.0, 2.5), Error);
  CHECK_THROWS_AS(build_cutoff_family(1.5, 4.0, g, 3.0, 2.5), Error);

  std::vector<double> eta_constants;
  for (double eta : {0.05, 0.1, 0.2}) {
    const auto fam = build_cutoff_family(eta, 8.0, g, 3.0, 2.5);
    const auto props = verify_cutoff_properties(fam);
    CHECK(props.size() == 7);
    for (const auto& p : props) {
      INFO(p.property);
      CHECK(p.violation() < 1e-10);
      CHECK(std::isfinite(p.fitted_constant));
    }
    eta_constants.push_back(props[3].fitted_constant);
  }
  // |φ − φ_p| / η: same order of magnitude across η
  for (double c : eta_constants) CHECK(c == doctest::Approx(eta_constants[1]).epsilon(0.5));
  // untabulated families are refused
  CHECK_THROWS_AS(verify_cutoff_properties(build_cutoff_profile(0.1, 8.0, 3.0, 2.5)), Error);
}

TEST_CASE("cutoff family: fft convolution cross-check and radial symmetry") {
  // The FFT route is a Riemann sum of the bump-bridged χ², so it converges faster than any
  // power of h but only once the band ηR is resolved. Check the value and the rate.
  CartesianGrid coarse(64, 32.0), fine(128, 32.0);
  const auto a = fft_cross_check(build_cutoff_family(0.5, 4.0, coarse, 3.0, 2.5));
  const auto b = fft_cross_check(build_cutoff_family(0.5, 4.0, fine, 3.0, 2.5));
  CHECK(b.phi < 1e-5);
  CHECK(b.phi_p < 1e-5);
  CHECK(b.phi_q < 1e-5);
  CHECK(a.phi / b.phi > 50.0);
  CHECK(a.phi_p / b.phi_p > 50.0);
  CHECK(b.angular_spread < 1e-10);
}

TEST_CASE("virial weights: quadratic is exact") {
  CartesianGrid g(16, 8.0);
  const auto w = build_virial_weight(VirialKind::Quadratic, 0.0, g);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const Vec3 x = g.position(i);
    CHECK(w.phi[i] == doctest::Approx(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    CHECK(w.grad[1][i] == doctest::Approx(2 * x[1]));
    CHECK(w.hessian[0][i] == 2.0);
    CHECK(w.hessian[3][i] == 2.0);
    CHECK(w.hessian[5][i] == 2.0);
    CHECK(w.hessian[1][i] == 0.0);
    CHECK(w.laplacian[i] == 6.0);
    CHECK(w.bilaplacian[i] == 0.0);
  }
}

TEST_CASE("virial weights: vartheta from nested quadrature") {
  using boost::math::quadrature::gauss_kronrod;
  auto theta = [](double s) { return vartheta(s).d2; };
  for (double s : {1.3, 1.5, 1.81, 2.0, 3.5}) {
    auto inner = [&](double sig) { return gauss_kronrod<double, 61>::integrate(theta, 0.0, sig, 10, 1e-14); };
    const double direct = gauss_kronrod<double, 61>::integrate(inner, 0.0, s, 10, 1e-13);
    CHECK(vartheta(s).v == doctest::Approx(direct).epsilon(1e-11));
    CHECK(vartheta(s).d1 == doctest::Approx(inner(s)).epsilon(1e-11));
  }
}

TEST_CASE("virial weights: radial rho structure and derivative consistency") {
  const double rho = 3.0;
  double worst_lap = -1e300, worst_dir = -1e300, min_theta = 1e300;
  for (int i = 0; i < 20000; ++i) {
    const double r = 1e-3 + 12.0 * i / 20000.0;
    const auto p = weight_profile(VirialKind::RadialRho, rho, r);
    if (r <= rho) CHECK(p.phi == doctest::Approx(r * r).epsilon(1e-14));
    worst_lap = std::max(worst_lap, p.laplacian);
    // Hessian eigenvalues are φ″ (radial) and φ′/r (tangential)
    worst_dir = std::max({worst_dir, p.d2, p.d1 / r});
    min_theta = std::min(min_theta, p.d2);
  }
  CHECK(worst_lap <= 6.0 + 1e-12);
  CHECK(worst_dir <= 2.0 + 1e-12);
  CHECK(min_theta >= 0.0);

  for (double r : {3.4, 4.1, 5.0, 5.9, 7.0}) {
    const double h = 1e-4;
    auto P = [&](double s) { return weight_profile(VirialKind::RadialRho, rho, s); };
    CHECK(std::abs((P(r + h).phi - P(r - h).phi) / (2 * h) - P(r).d1) < 1e-7);
    CHECK(std::abs((P(r + h).d1 - P(r - h).d1) / (2 * h) - P(r).d2) < 1e-7);
    const double lap_fd = (P(r + h).d1 * (r + h) * (r + h) - P(r - h).d1 * (r - h) * (r - h)) /
                          (2 * h * r * r);
    CHECK(std::abs(lap_fd - P(r).laplacian) < 1e-6);
    auto L = [&](double s) { return P(s).laplacian; };
    const double lap2 = (L(r + h) - 2 * L(r) + L(r - h)) / (h * h) + (L(r + h) - L(r - h)) / (h * r);
    CHECK(std::abs(lap2 - P(r).bilaplacian) < 1e-3);
  }
}

TEST_CASE("virial weights: cylindrical and radial-grid tabulations") {
  CartesianGrid g(32, 16.0);
  const auto w = build_virial_weight(VirialKind::CylindricalRho, 2.0, g);
  for (std::size_t i = 0; i < g.size(); i += 13) {
    const Vec3 x = g.position(i);
    CHECK(w.hessian[5][i] == 2.0);
    CHECK(w.hessian[2][i] == 0.0);
    CHECK(w.grad[2][i] == doctest::Approx(2 * x[2]));
    if (std::hypot(x[0], x[1]) <= 2.0) {
      CHECK(w.phi[i] == doctest::Approx(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
      CHECK(w.laplacian[i] == doctest::Approx(6.0));
    }
    // trace of the Hessian is the Laplacian
    CHECK(w.hessian[0][i] + w.hessian[3][i] + w.hessian[5][i] ==
          doctest::Approx(w.laplacian[i]).epsilon(1e-12));
  }
  const auto wr = build_virial_weight(VirialKind::RadialRho, 2.0, g);
  for (std::size_t i = 0; i < g.size(); i += 11)
    CHECK(wr.hessian[0][i] + wr.hessian[3][i] + wr.hessian[5][i] ==
          doctest::Approx(wr.laplacian[i]).epsilon(1e-12));

  RadialGrid rg(20.0, 400);
  const auto wq = build_virial_weight(VirialKind::RadialRho, 4.0, rg);
  CHECK(wq.grad[0][10] == doctest::Approx(2 * rg.r(10)));
  CHECK_THROWS_AS(build_virial_weight(VirialKind::CylindricalRho, 4.0, rg), Error);
  CHECK_THROWS_AS(build_virial_weight(VirialKind::RadialRho, 0.0, rg), Error);
}
