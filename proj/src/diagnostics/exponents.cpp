#include "nls/diagnostics/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "nls/core/error.hpp"

namespace nls {

double StrichartzExponentTable::max_residual() const {
  double m = 0;
  for (const auto& [name, r] : residuals) m = std::max(m, std::isfinite(r) ? r : INFINITY);
  return m;
}

bool StrichartzExponentTable::interpolation_in_range() const {
  auto ok = [](double th, double g) { return th > 0 && th < 1 && g >= 2 && g <= 6; };
  return ok(theta_34, gamma_34) && ok(theta_35, gamma_35);
}

namespace {

double conj(double x) { return x / (x - 1.0); }

}  // namespace

StrichartzExponentTable exponent_table(double p, double q) {
  if (!(1 < q && q <= p && p < 5)) fail(ErrorKind::Domain, "exponent table needs 1 < q <= p < 5");
  StrichartzExponentTable t;
  t.p = p;
  t.q = q;
  auto family = [](double s, double& a, double& b, double& m, double& n, double& r, double& sg) {
    a = 4 * (s + 1) / (3 * (s - 1));
    m = 2 * (s - 1) * (s + 1) / (5 - s);
    n = 2 * (s - 1) * (s + 1) / (3 * s * s - 5 * s - 2);
    b = s + 1;
    r = 6 * (s - 1) * (s + 1) / (3 * s * s + 2 * s - 13);
    sg = (3 * s - 7) / (2 * (s - 1));
  };
  family(p, t.a1, t.b1, t.m1, t.n1, t.r1, t.sigma1);
  family(q, t.a2, t.b2, t.m2, t.n2, t.r2, t.sigma2);

  t.theta_34 = (3 * q - 7) * (p - 1) / ((3 * p - 7) * (q - 1));
  t.rho_34 = (1 - t.theta_34) * t.m1 * t.m2 / (t.m1 - t.theta_34 * t.m2);
  t.gamma_34 = (1 - t.theta_34) * t.b1 * t.b2 / (t.b1 - t.theta_34 * t.b2);

  const double n1c = conj(t.n1), b1c = conj(t.b1);
  t.theta_35 = (3 * p * q - 3 * q - 4 * p) / (q * (3 * p - 7));
  t.rho_35 = (1 - t.theta_35) * q * t.m1 * n1c / (t.m1 - t.theta_35 * q * n1c);
  t.gamma_35 = (1 - t.theta_35) * q * t.b1 * b1c / (t.b1 - t.theta_35 * q * b1c);

  auto add = [&](const char* name, double lhs, double rhs) { t.residuals.emplace_back(name, std::abs(lhs - rhs)); };
  add("admissible(a1,b1)", 2 / t.a1 + 3 / t.b1, 1.5);
  add("admissible(a2,b2)", 2 / t.a2 + 3 / t.b2, 1.5);
  add("admissible(m1,r1)", 2 / t.m1 + 3 / t.r1, 1.5);
  add("admissible(m2,r2)", 2 / t.m2 + 3 / t.r2, 1.5);
  add("holder(m1,n1,a1)", 1 / t.m1 + 1 / t.n1, 2 / t.a1);
  add("holder(m2,n2,a2)", 1 / t.m2 + 1 / t.n2, 2 / t.a2);
  add("sobolev(b1,r1)", 1 / t.b1, 1 / t.r1 - t.sigma1 / 3);
  add("sobolev(b2,r2)", 1 / t.b2, 1 / t.r2 - t.sigma2 / 3);
  // the interpolation pairs are admissible and interpolate the target norms; at q = p
  // both θ equal 1 and the pairs are undefined
  if (q < p) {
    add("admissible(rho34,gamma34)", 2 / t.rho_34 + 3 / t.gamma_34, 1.5);
    add("interpolation_time_34", 1 / t.m2, t.theta_34 / t.m1 + (1 - t.theta_34) / t.rho_34);
    add("interpolation_space_34", 1 / t.b2, t.theta_34 / t.b1 + (1 - t.theta_34) / t.gamma_34);
    add("admissible(rho35,gamma35)", 2 / t.rho_35 + 3 / t.gamma_35, 1.5);
    add("interpolation_time_35", 1 / (q * n1c), t.theta_35 / t.m1 + (1 - t.theta_35) / t.rho_35);
    add("interpolation_space_35", 1 / (q * b1c), t.theta_35 / t.b1 + (1 - t.theta_35) / t.gamma_35);
  }
  return t;
}

StrichartzExponentTable strichartz_table(const PhysParams& params) {
  const double p = params.p, q = params.q;
  if (!(7.0 / 3.0 < q && q < p && p < 5.0))
    fail(ErrorKind::Domain, "Strichartz exponent table needs the scattering regime 7/3 < q < p < 5");
  return exponent_table(p, q);
}

std::string exponent_csv_header() { return "name,value"; }

std::vector<std::string> to_csv_rows(const StrichartzExponentTable& t) {
  std::vector<std::string> rows;
  char buf[128];
  auto put = [&](const std::string& name, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    rows.push_back(name + "," + buf);
  };
  put("p", t.p);
  put("q", t.q);
  put("a1", t.a1), put("b1", t.b1), put("m1", t.m1), put("n1", t.n1), put("r1", t.r1), put("sigma1", t.sigma1);
  put("a2", t.a2), put("b2", t.b2), put("m2", t.m2), put("n2", t.n2), put("r2", t.r2), put("sigma2", t.sigma2);
  put("theta_34", t.theta_34), put("rho_34", t.rho_34), put("gamma_34", t.gamma_34);
  put("theta_35", t.theta_35), put("rho_35", t.rho_35), put("gamma_35", t.gamma_35);
  for (const auto& [name, r] : t.residuals) put("residual_" + name, r);
  return rows;
}

}  // namespace nls
