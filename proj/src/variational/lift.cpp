#include <cmath>

#include "nls/core/error.hpp"
#include "nls/core/radial.hpp"
#include "nls/functionals/report.hpp"
#include "nls/variational/ground_state.hpp"

namespace nls {

RadialGrid default_ground_state_grid() { return RadialGrid(30.0, 24000); }

void attach_exponential_tail(const RadialGrid& grid, RField& psi, double omega, double rel_floor) {
  const double floor = rel_floor * psi[0];
  std::size_t cut = 1;
  while (cut < psi.size() && psi[cut] > floor && psi[cut] < psi[cut - 1]) ++cut;
  if (cut == psi.size()) return;
  if (cut < 8) fail(ErrorKind::Convergence, "profile is not decaying near the origin");
  const double k = std::sqrt(omega);
  const double rc = grid.r(cut - 1);
  const double C = psi[cut - 1] * rc * std::exp(k * rc);
  for (std::size_t j = cut; j < psi.size(); ++j) psi[j] = C * std::exp(-k * grid.r(j)) / grid.r(j);
}

FieldState GroundState::state() const {
  CField v(profile.size());
  for (std::size_t j = 0; j < profile.size(); ++j) v[j] = profile[j];
  return FieldState(Grid(grid), std::move(v), 0.0);
}

GroundState certify(const RadialGrid& grid, RField profile, const PhysParams& params, std::string method) {
  if (profile.size() != grid.size()) fail(ErrorKind::Dimension, "ground-state profile does not match grid");
  GroundState gs;
  gs.grid = grid;
  gs.params = params;
  gs.omega = params.omega;
  gs.method = std::move(method);
  gs.profile = std::move(profile);
  const RField& psi = gs.profile;
  gs.amplitude = radial::origin_value(psi);

  const FunctionalReport r = report(gs.state(), params);
  gs.m_omega = r.action;
  gs.pohozaev_residual = std::abs(r.pohozaev) / r.kinetic;

  RField d1 = radial::derivative(grid, psi), d2 = radial::second_derivative(grid, psi);
  double res = 0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double a = std::abs(psi[j]);
    const double f = params.omega * psi[j] + std::pow(a, params.q - 1) * psi[j] - std::pow(a, params.p - 1) * psi[j];
    res = std::max(res, std::abs(-d2[j] - 2.0 * d1[j] / grid.r(j) + f));
  }
  gs.ode_residual = res;
  return gs;
}

FieldState lift_to_cartesian(const FieldState& radial, const CartesianGrid& g) {
  const auto& rg = radial.radial();
  RField re(radial.size()), im(radial.size());
  for (std::size_t j = 0; j < radial.size(); ++j) {
    re[j] = radial.values[j].real();
    im[j] = radial.values[j].imag();
  }
  radial::EvenSpline sr(rg, re), si(rg, im);
  FieldState out(g, radial.time);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    out.values[i] = cplx(sr(r), si(r));
  }
  return out;
}

}  // namespace nls
