#include <cmath>
#include <deque>
#include <sstream>

#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"
#include "nls/variational/ground_state.hpp"
#include "nls/variational/scaling.hpp"

namespace nls {

namespace {

struct Eval {
  Primitives prim;
  double lambda0 = 1;
  double J = 0;  // I_ω(φ_{λ0}) = S_ω(φ_{λ0})
  RField grad;   // Euclidean gradient of J in nodal values
};

class Problem {
 public:
  Problem(const PhysParams& pp, const RadialGrid& g)
      : pp_(pp), g_(g), w_(radial_weights(g)), D_(g, radial::FdOperator::Order::First) {}

  Eval evaluate(const RField& phi, bool with_grad) const {
    const std::size_t m = phi.size();
    Eval e;
    RField dphi = D_.apply(phi);
    for (std::size_t j = 0; j < m; ++j) {
      const double a2 = phi[j] * phi[j];
      e.prim.mass += w_[j] * a2;
      e.prim.kinetic += w_[j] * dphi[j] * dphi[j];
      e.prim.lp += w_[j] * abs_pow(a2, pp_.p + 1);
      e.prim.lq += w_[j] * abs_pow(a2, pp_.q + 1);
    }
    e.lambda0 = lambda0_from(e.prim.kinetic, e.prim.lp, e.prim.lq, pp_);
    e.J = scaled_i_omega(e.lambda0, e.prim, pp_);
    if (!with_grad) return e;
    // envelope theorem: λ0 maximizes λ ↦ S(φ_λ), so only the explicit φ-dependence counts
    const double l = e.lambda0;
    const double ck = l * l;
    const double cq = std::pow(l, 1.5 * (pp_.q - 1));
    const double cp = std::pow(l, 1.5 * (pp_.p - 1));
    RField wd(m);
    for (std::size_t j = 0; j < m; ++j) wd[j] = w_[j] * dphi[j];
    e.grad.assign(m, 0.0);
    D_.apply_transpose(wd, e.grad);
    for (std::size_t j = 0; j < m; ++j) {
      const double a2 = phi[j] * phi[j];
      e.grad[j] *= ck;
      e.grad[j] += w_[j] * (cq * abs_pow(a2, pp_.q - 1) * phi[j] - cp * abs_pow(a2, pp_.p - 1) * phi[j] +
                            pp_.omega * phi[j]);
    }
    return e;
  }

  // H¹ Riesz map: solve (-Δ + ω) d = g/w through v = r d with v(0) = v(r_{m+1}) = 0.
  RField precondition(const RField& grad) const {
    const std::size_t m = grad.size();
    const double h = g_.spacing(), ih2 = 1.0 / (h * h);
    std::vector<double> c(m), d(m);
    const double diag = 2 * ih2 + pp_.omega, off = -ih2;
    for (std::size_t j = 0; j < m; ++j) {
      const double rhs = g_.r(j) * grad[j] / w_[j];
      if (j == 0) {
        c[j] = off / diag;
        d[j] = rhs / diag;
      } else {
        const double den = diag - off * c[j - 1];
        c[j] = off / den;
        d[j] = (rhs - off * d[j - 1]) / den;
      }
    }
    RField v(m);
    for (std::size_t j = m; j-- > 0;) v[j] = j + 1 < m ? d[j] - c[j] * v[j + 1] : d[j];
    for (std::size_t j = 0; j < m; ++j) v[j] /= g_.r(j);
    return v;
  }

  RField rescale(const RField& phi, double lambda) const {
    CField v(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) v[j] = phi[j];
    FieldState s(Grid(g_), std::move(v), 0.0);
    FieldState t = nls::rescale(s, lambda, 1e-3);
    RField out(phi.size());
    for (std::size_t j = 0; j < phi.size(); ++j) out[j] = t.values[j].real();
    return out;
  }

 private:
  PhysParams pp_;
  RadialGrid g_;
  RField w_;
  radial::FdOperator D_;
};

double dot(const RField& a, const RField& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GroundState ground_state_flow(const PhysParams& params, const RadialGrid& grid, const FlowOptions& opt) {
  params.validate();
  if (!(params.q > 7.0 / 3.0))
    fail(ErrorKind::Regime, "constrained flow needs q > 7/3 so that I_omega is coercive");
  Problem prob(params, grid);

  RField phi(grid.size());
  if (opt.initial) {
    if (opt.initial->size() != grid.size()) fail(ErrorKind::Dimension, "flow initial iterate does not match grid");
    phi = *opt.initial;
  } else {
    const double amp = 2.0 * std::pow(2.0 * params.omega, 1.0 / (params.p - 1));
    for (std::size_t j = 0; j < phi.size(); ++j) phi[j] = amp * std::exp(-0.5 * grid.r(j) * grid.r(j));
  }
  Eval cur = prob.evaluate(phi, false);
  if (std::abs(cur.lambda0 - 1) > opt.rescale_threshold) phi = prob.rescale(phi, cur.lambda0);
  cur = prob.evaluate(phi, true);

  std::deque<double> history{cur.J};
  RField dir, prev_pg, prev_grad;
  double alpha = 1.0;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    RField pg = prob.precondition(cur.grad);
    // Polak-Ribière+ in the preconditioned metric, restarted whenever it stops descending
    double beta = 0;
    if (!prev_pg.empty()) {
      double num = 0;
      for (std::size_t j = 0; j < pg.size(); ++j) num += pg[j] * (cur.grad[j] - prev_grad[j]);
      beta = std::max(0.0, num / dot(prev_pg, prev_grad));
    }
    if (dir.empty() || beta == 0.0) {
      dir.assign(pg.size(), 0.0);
      for (std::size_t j = 0; j < pg.size(); ++j) dir[j] = -pg[j];
    } else {
      for (std::size_t j = 0; j < pg.size(); ++j) dir[j] = -pg[j] + beta * dir[j];
    }
    double slope = dot(cur.grad, dir);
    if (slope >= 0) {
      for (std::size_t j = 0; j < pg.size(); ++j) dir[j] = -pg[j];
      slope = dot(cur.grad, dir);
    }
    if (slope >= 0) break;

    alpha = std::min(1.0, 4.0 * alpha);
    RField trial(phi.size());
    Eval next;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t j = 0; j < phi.size(); ++j) trial[j] = phi[j] + alpha * dir[j];
      try {
        next = prob.evaluate(trial, false);
        if (next.J <= cur.J + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
      } catch (const Error&) {
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    phi = std::move(trial);
    if (std::abs(next.lambda0 - 1) > opt.rescale_threshold) {
      phi = prob.rescale(phi, next.lambda0);
      dir.clear();
      prev_pg.clear();
    } else {
      prev_pg = std::move(pg);
      prev_grad = cur.grad;
    }
    cur = prob.evaluate(phi, true);
    if (opt.on_iterate) opt.on_iterate(it, cur.J, scaled_pohozaev(1.0, cur.prim.kinetic, cur.prim.lp, cur.prim.lq, params));
    history.push_back(cur.J);
    if (int(history.size()) > opt.window + 1) history.pop_front();
    if (int(history.size()) == opt.window + 1 && history.front() - history.back() <= opt.rel_tol * std::abs(history.back()))
      break;
  }

  RField final_phi = prob.rescale(phi, cur.lambda0);
  for (auto& v : final_phi) v = std::abs(v);
  attach_exponential_tail(grid, final_phi, params.omega);
  GroundState gs = certify(grid, std::move(final_phi), params, "flow");
  gs.iterations = it;
  if (opt.reference_m && gs.m_omega > *opt.reference_m * (1 + 1e-2)) {
    std::ostringstream os;
    os << "constrained flow stalled at I=" << gs.m_omega << " after " << it << " iterations, reference "
       << *opt.reference_m;
    fail(ErrorKind::Convergence, os.str());
  }
  return gs;
}

}  // namespace nls
