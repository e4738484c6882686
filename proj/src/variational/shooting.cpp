#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "nls/core/error.hpp"
#include "nls/variational/ground_state.hpp"

namespace nls {

namespace {

using State = std::array<double, 2>;
namespace odeint = boost::numeric::odeint;

enum class Outcome { Undershoot, Overshoot, Undecided };

struct Shot {
  Outcome outcome = Outcome::Undecided;
  double r_event = 0;
  std::vector<double> psi;  // nodal values up to the event (NaN beyond)
};

double nonlin(double psi, const PhysParams& pp) {
  const double a = std::abs(psi);
  return pp.omega * psi + std::pow(a, pp.q - 1) * psi - std::pow(a, pp.p - 1) * psi;
}

double nonlin_prime(double psi, const PhysParams& pp) {
  const double a = std::abs(psi);
  return pp.omega + pp.q * std::pow(a, pp.q - 1) - pp.p * std::pow(a, pp.p - 1);
}

Shot shoot(double A, const PhysParams& pp, const RadialGrid& g, const ShootingOptions& opt, bool record) {
  auto rhs = [&pp](const State& x, State& dx, double r) {
    dx[0] = x[1];
    dx[1] = nonlin(x[0], pp) - 2.0 * x[1] / r;
  };
  // series start: ψ = A + c2 r² + c4 r⁴ removes the 2/r singularity
  const double c2 = nonlin(A, pp) / 6.0;
  const double c4 = nonlin_prime(A, pp) * c2 / 20.0;
  const double r0 = 1e-2 * g.spacing();
  State x{A + c2 * r0 * r0 + c4 * r0 * r0 * r0 * r0, 2 * c2 * r0 + 4 * c4 * r0 * r0 * r0};

  Shot shot;
  if (record) shot.psi.assign(g.size(), std::nan(""));
  auto stepper = odeint::make_dense_output(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, r0, 0.1 * g.spacing());
  std::size_t next = 0;
  const double r_end = g.r_max();
  State tmp;
  while (stepper.current_time() < r_end) {
    auto [t0, t1] = stepper.do_step(rhs);
    (void)t0;
    if (record)
      while (next < g.size() && g.r(next) <= t1) {
        stepper.calc_state(g.r(next), tmp);
        shot.psi[next++] = tmp[0];
      }
    const State& cur = stepper.current_state();
    if (cur[0] < 0) {
      shot.outcome = Outcome::Overshoot;
      shot.r_event = t1;
      break;
    }
    if (cur[1] > 0) {
      shot.outcome = Outcome::Undershoot;
      shot.r_event = t1;
      break;
    }
  }
  return shot;
}

}  // namespace

GroundState ground_state_shooting(const PhysParams& params, const RadialGrid& grid, const ShootingOptions& opt) {
  params.validate();
  const double guess = std::pow(2.0 * params.omega, 1.0 / (params.p - 1));
  double lo = opt.a_lo.value_or(guess / 10), hi = opt.a_hi.value_or(10 * guess);
  const Outcome olo = shoot(lo, params, grid, opt, false).outcome;
  const Outcome ohi = shoot(hi, params, grid, opt, false).outcome;
  if (olo != Outcome::Undershoot || ohi != Outcome::Overshoot)
    fail(ErrorKind::NoBracket, "no ground state in amplitude bracket [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "] for " + params.describe());
  int it = 0;
  for (; it < opt.max_bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shoot(mid, params, grid, opt, false).outcome == Outcome::Overshoot ? hi : lo) = mid;
  }
  Shot a = shoot(lo, params, grid, opt, true);
  Shot b = shoot(hi, params, grid, opt, true);

  // Trust the profile while the two bracketing shots agree; past that point the
  // linearized tail C e^{-√ω r}/r takes over.
  RField psi(grid.size());
  std::size_t cut = 0;
  for (; cut < grid.size(); ++cut) {
    const double pa = a.psi[cut], pb = b.psi[cut];
    if (!std::isfinite(pa) || !std::isfinite(pb) || pa <= 0 || pb <= 0) break;
    if (std::abs(pa - pb) > 1e-6 * std::abs(pa)) break;
    if (cut > 0 && pa >= psi[cut - 1]) break;
    psi[cut] = 0.5 * (pa + pb);
  }
  if (cut < 8) fail(ErrorKind::Convergence, "shooting profile diverged immediately");
  // back off a few nodes from the split so the matching point is clean
  cut = cut > 16 ? cut - 4 : cut;
  for (std::size_t j = cut; j < grid.size(); ++j) psi[j] = 0.0;
  attach_exponential_tail(grid, psi, params.omega, 0.0);

  GroundState gs = certify(grid, std::move(psi), params, "shooting");
  gs.iterations = it;
  gs.amplitude = 0.5 * (lo + hi);
  return gs;
}

}  // namespace nls
