#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "nls/core/all.hpp"
#include "nls/functionals/report.hpp"

using namespace nls;
using std::numbers::pi;

namespace {

FieldState gaussian(const CartesianGrid& g, double a = 1.0) {
  return FieldState::sample(g, [a](const Vec3& x) { return cplx(a * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]))); });
}

double radial_oracle(const std::function<double(double)>& f) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([&](double r) { return 4 * pi * r * r * f(r); }, 0.0, 12.0, 15, 1e-15);
}

}  // namespace

TEST_CASE("zero state gives zero report") {
  FieldState z(CartesianGrid(16, 10.0));
  auto r = report(z, PhysParams::make(3, 2.5, 1, Regime::Scattering));
  CHECK(r.mass == 0);
  CHECK(r.kinetic == 0);
  CHECK(r.lq == 0);
  CHECK(r.lp == 0);
  CHECK(r.energy == 0);
  CHECK(r.action == 0);
  CHECK(r.pohozaev == 0);
  CHECK(r.i_omega == 0);
}

TEST_CASE("gaussian functionals match an independent radial quadrature") {
  const double q = 7.0 / 3.0 + 0.1, p = 3.0;
  auto params = PhysParams::make(p, q, 1.0, Regime::Scattering);
  CartesianGrid g(64, 20.0);
  auto r = report(gaussian(g), params);
  const double m = radial_oracle([](double x) { return std::exp(-2 * x * x); });
  const double k = radial_oracle([](double x) { return 4 * x * x * std::exp(-2 * x * x); });
  const double lq = radial_oracle([&](double x) { return std::exp(-(q + 1) * x * x); });
  const double lp = radial_oracle([&](double x) { return std::exp(-(p + 1) * x * x); });
  CHECK(std::abs(r.mass - m) < 1e-8 * m);
  CHECK(std::abs(r.kinetic - k) < 1e-8 * k);
  CHECK(std::abs(r.lq - lq) < 1e-8 * lq);
  CHECK(std::abs(r.lp - lp) < 1e-8 * lp);
  const double e = 0.5 * k + lq / (q + 1) - lp / (p + 1);
  CHECK(std::abs(r.energy - e) < 1e-8 * std::abs(e));
}

TEST_CASE("report identities hold by construction") {
  auto params = PhysParams::make(3.5, 2.6, 0.7, Regime::Scattering);
  CartesianGrid g(32, 12.0);
  auto s = FieldState::sample(g, [](const Vec3& x) {
    return 1.3 * std::exp(-0.7 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])) * std::exp(cplx(0, 0.4 * x[0]));
  });
  auto r = report(s, params);
  const double p = params.p, q = params.q;
  CHECK(r.energy == r.kinetic / 2 + r.lq / (q + 1) - r.lp / (p + 1));
  CHECK(r.action == r.energy + (params.omega / 2) * r.mass);
  CHECK(r.pohozaev == r.kinetic + (3 * (q - 1) / (2 * (q + 1))) * r.lq - (3 * (p - 1) / (2 * (p + 1))) * r.lp);
  CHECK(r.i_omega == r.action - (2 / (3 * (q - 1))) * r.pohozaev);
  CHECK(r.momentum[0] == doctest::Approx(0.4 * r.mass).epsilon(1e-10));
}

TEST_CASE("lebesgue norms") {
  CartesianGrid g(64, 20.0);
  CHECK(lebesgue_norm(FieldState(g), 3.0) == 0.0);
  CHECK(std::abs(lebesgue_norm(gaussian(g), 4.0) - std::pow(pi / 4, 3.0 / 8)) < 1e-8);
  FieldState c(CartesianGrid(16, 3.0));
  for (auto& z : c.values) z = 2.5;
  CHECK(lebesgue_norm(c, 2.0) == doctest::Approx(2.5 * std::pow(3.0, 1.5)).epsilon(1e-13));
  CHECK_THROWS_AS(lebesgue_norm(c, 0.5), Error);
}

TEST_CASE("radial kinetic evaluations agree with the Gaussian closed form") {
  RadialGrid rg(12.0, 2400);
  auto s = FieldState::sample(rg, [](double r) { return cplx(std::exp(-r * r)); });
  const double exact = 3.0 * std::pow(pi / 2, 1.5);
  CHECK(std::abs(kinetic(s, RadialKinetic::FiniteDifference) - exact) < 1e-9 * exact);
  CHECK(std::abs(kinetic(s, RadialKinetic::Sine) - exact) < 1e-11 * exact);
  CHECK(mass(s) == doctest::Approx(std::pow(pi / 2, 1.5)).epsilon(1e-12));
}

TEST_CASE("fractional powers at zeros of the field") {
  CHECK(abs_pow(0.0, 3.4) == 0.0);
  CHECK(abs_pow(4.0, 3.0) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("non-finite state rejected with index") {
  FieldState s(CartesianGrid(8, 4.0));
  s.values[42] = cplx(0, INFINITY);
  CHECK_THROWS_WITH_AS(report(s, PhysParams::make(3, 2.5, 1, Regime::Scattering)),
                       doctest::Contains("42"), Error);
}

TEST_CASE("csv row round trip") {
  auto params = PhysParams::make(3, 2.5, 1, Regime::Scattering);
  auto r = report(gaussian(CartesianGrid(16, 8.0), 0.7), params);
  r.time = 0.1;
  std::string row = to_csv_row(r);
  std::istringstream in(row);
  std::vector<double> vals;
  std::string cell;
  while (std::getline(in, cell, ',')) vals.push_back(std::stod(cell));
  REQUIRE(vals.size() == 9);
  CHECK(vals[0] == r.time);
  CHECK(vals[1] == r.mass);
  CHECK(vals[6] == r.action);
  CHECK(vals[8] == r.i_omega);
  CHECK(report_csv_header() == "time,mass,kinetic,lq,lp,energy,action,pohozaev,i_omega");
}
