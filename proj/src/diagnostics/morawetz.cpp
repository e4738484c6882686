#include "nls/diagnostics/morawetz.hpp"

#include <cmath>
#include <limits>

#include "nls/core/convolution.hpp"
#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/spectral.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

namespace {

// Pointwise fields the action and its derivative need.
struct Fields {
  RField rho, div_j;
  std::array<RField, 3> j, div_t, grad_lap_rho, grad_lp, grad_lq;
};

RField real_part(const CField& c) {
  RField r(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) r[i] = c[i].real();
  return r;
}

// ∂_axis of two real fields at once: the derivative maps real fields to real fields.
void derivative_pair(const CartesianGrid& g, const RField& a, const RField& b, int axis, RField& da,
                     RField& db) {
  CField c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = cplx(a[i], b[i]);
  const CField d = spectral::derivative(g, c, axis);
  da.resize(a.size());
  db.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    da[i] = d[i].real();
    db[i] = d[i].imag();
  }
}

Fields make_fields(const FieldState& s, const PhysParams& params) {
  const auto& g = s.cartesian();
  const std::size_t n = s.size();
  const auto du = spectral::gradient(s);
  Fields f;
  f.rho.resize(n);
  RField lp(n), lq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = std::norm(s.values[i]);
    f.rho[i] = a2;
    lp[i] = abs_pow(a2, params.p + 1);
    lq[i] = abs_pow(a2, params.q + 1);
  }
  for (int a = 0; a < 3; ++a) {
    f.j[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) f.j[a][i] = (std::conj(s.values[i]) * du[a][i]).imag();
  }
  f.div_j.assign(n, 0.0);
  for (int a = 0; a < 3; ++a) {
    const RField d = real_part(spectral::derivative(g, CField(f.j[a].begin(), f.j[a].end()), a));
    for (std::size_t i = 0; i < n; ++i) f.div_j[i] += d[i];
  }
  // T_jk = Re(∂_ju ∂_kū), symmetric
  std::array<std::array<RField, 3>, 3> T;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      T[a][b].resize(n);
      for (std::size_t i = 0; i < n; ++i) T[a][b][i] = (du[a][i] * std::conj(du[b][i])).real();
      if (b != a) T[b][a] = T[a][b];
    }
  for (int a = 0; a < 3; ++a) f.div_t[a].assign(n, 0.0);
  RField d1, d2;
  for (int k = 0; k < 3; ++k) {
    // ∂_k T_{jk} for j = 0, 1 together, then j = 2
    derivative_pair(g, T[0][k], T[1][k], k, d1, d2);
    for (std::size_t i = 0; i < n; ++i) {
      f.div_t[0][i] += d1[i];
      f.div_t[1][i] += d2[i];
    }
    derivative_pair(g, T[2][k], T[2][k], k, d1, d2);
    for (std::size_t i = 0; i < n; ++i) f.div_t[2][i] += d1[i];
  }
  const RField lap = spectral::laplacian(g, f.rho);
  f.grad_lap_rho = spectral::gradient(g, lap);
  f.grad_lp = spectral::gradient(g, lp);
  f.grad_lq = spectral::gradient(g, lq);
  return f;
}

double dot(const CartesianGrid& g, const RField& a, const RField& b) {
  RField prod(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) prod[i] = a[i] * b[i];
  return integrate(g, prod);
}

// Sums of the terms given the two convolved vector fields ρ⋆K and (∇·J)⋆K.
MorawetzTerms assemble(const CartesianGrid& g, const Fields& f, const std::array<RField, 3>& rho_k,
                       const std::array<RField, 3>& divj_k, const PhysParams& params,
                       const MorawetzOptions& opt) {
  const double p = params.p, q = params.q;
  MorawetzTerms t;
  for (int a = 0; a < 3; ++a) {
    t.term[0] += -4.0 * dot(g, divj_k[a], f.j[a]);
    t.term[1] += -4.0 * dot(g, rho_k[a], f.div_t[a]);
    t.term[2] += dot(g, rho_k[a], f.grad_lap_rho[a]);
    t.term[3] += 2.0 * (p - 1) / (p + 1) * dot(g, rho_k[a], f.grad_lp[a]);
    t.term[4] += -2.0 * (q - 1) / (q + 1) * dot(g, rho_k[a], f.grad_lq[a]);
  }
  if (opt.flip_term4_sign) t.term[3] = -t.term[3];
  return t;
}

}  // namespace

struct MorawetzEvaluator::Impl {
  CartesianGrid grid;
  double radius;
  std::array<ConvolutionKernel, 3> kernels;
};

namespace {

ConvolutionKernel component_kernel(const CartesianGrid& g, const CutoffFamily& fam, int a) {
  // ψ_R(w)·w tends to a constant times R at large |w| and is never truncated; every
  // displacement between box points is sampled, so the face warning does not apply.
  return ConvolutionKernel(
      g,
      [&fam, a](const Vec3& w) {
        const double r = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
        return fam.psi_at(r).value * w[a];
      },
      std::numeric_limits<double>::infinity());
}

}  // namespace

MorawetzEvaluator::MorawetzEvaluator(const CartesianGrid& g, const CutoffFamily& family)
    : impl_(new Impl{g, family.radius,
                     {component_kernel(g, family, 0), component_kernel(g, family, 1),
                      component_kernel(g, family, 2)}}) {}

MorawetzEvaluator::~MorawetzEvaluator() = default;
MorawetzEvaluator::MorawetzEvaluator(MorawetzEvaluator&&) noexcept = default;

double MorawetzEvaluator::radius() const { return impl_->radius; }

double MorawetzEvaluator::action(const FieldState& s) const {
  const auto& g = s.cartesian();
  require_same_grid(s.grid, impl_->grid, "Morawetz kernel");
  const std::size_t n = s.size();
  const auto du = spectral::gradient(s);
  RField rho(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = std::norm(s.values[i]);
  double m = 0;
  for (int a = 0; a < 3; ++a) {
    const auto conv = fft_convolve(g, rho, impl_->kernels[a]);
    RField jk(n);
    for (std::size_t i = 0; i < n; ++i) jk[i] = (std::conj(s.values[i]) * du[a][i]).imag();
    m += 2.0 * dot(g, conv.values, jk);
  }
  return m;
}

MorawetzTerms MorawetzEvaluator::terms(const FieldState& s, const PhysParams& params,
                                       const MorawetzOptions& opt) const {
  const auto& g = s.cartesian();
  require_same_grid(s.grid, impl_->grid, "Morawetz kernel");
  const Fields f = make_fields(s, params);
  std::array<RField, 3> rho_k, divj_k;
  for (int a = 0; a < 3; ++a) {
    rho_k[a] = fft_convolve(g, f.rho, impl_->kernels[a]).values;
    divj_k[a] = fft_convolve(g, f.div_j, impl_->kernels[a]).values;
  }
  return assemble(g, f, rho_k, divj_k, params, opt);
}

double morawetz_action(const FieldState& s, const CutoffFamily& family) {
  return MorawetzEvaluator(s.cartesian(), family).action(s);
}

MorawetzTerms morawetz_derivative_terms(const FieldState& s, const CutoffFamily& family,
                                        const PhysParams& params, const MorawetzOptions& opt) {
  return MorawetzEvaluator(s.cartesian(), family).terms(s, params, opt);
}

MorawetzDirect morawetz_direct(const FieldState& s, const CutoffFamily& family, const PhysParams& params) {
  const auto& g = s.cartesian();
  const std::size_t n = s.size();
  if (n > std::size_t(32) * 32 * 32) fail(ErrorKind::Budget, "direct Morawetz sums are for grids up to 32³");
  const Fields f = make_fields(s, params);
  std::vector<Vec3> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = g.position(i);
  std::array<RField, 3> rho_k, divj_k;
  for (int a = 0; a < 3; ++a) {
    rho_k[a].assign(n, 0.0);
    divj_k[a].assign(n, 0.0);
  }
  const double dv = g.cell_volume();
  for (std::size_t i = 0; i < n; ++i) {
    double sr[3] = {0, 0, 0}, sd[3] = {0, 0, 0};
    for (std::size_t j = 0; j < n; ++j) {
      const double w0 = x[i][0] - x[j][0], w1 = x[i][1] - x[j][1], w2 = x[i][2] - x[j][2];
      const double psi = family.psi_at(std::sqrt(w0 * w0 + w1 * w1 + w2 * w2)).value;
      const double a = psi * f.rho[j], b = psi * f.div_j[j];
      sr[0] += a * w0;
      sr[1] += a * w1;
      sr[2] += a * w2;
      sd[0] += b * w0;
      sd[1] += b * w1;
      sd[2] += b * w2;
    }
    for (int a = 0; a < 3; ++a) {
      rho_k[a][i] = dv * sr[a];
      divj_k[a][i] = dv * sd[a];
    }
  }
  MorawetzDirect out;
  for (int a = 0; a < 3; ++a) out.action += 2.0 * dot(g, rho_k[a], f.j[a]);
  out.terms = assemble(g, f, rho_k, divj_k, params, {});
  return out;
}

MorawetzSeries morawetz_series(const std::vector<FieldState>& states, const CutoffFamily& family,
                               const PhysParams& params, const MorawetzOptions& opt, double taint_time) {
  MorawetzSeries out;
  if (states.empty()) return out;
  const MorawetzEvaluator ev(states.front().cartesian(), family);
  for (const auto& s : states) {
    MorawetzSample m;
    m.t = s.time;
    m.radius = family.radius;
    m.m_value = ev.action(s);
    m.terms = ev.terms(s, params, opt);
    m.tainted = taint_time >= 0 && s.time >= taint_time;
    out.samples.push_back(m);
    out.bound_constant = std::max(out.bound_constant, std::abs(m.m_value) / family.radius);
  }
  for (std::size_t i = 1; i + 1 < out.samples.size(); ++i) {
    auto& m = out.samples[i];
    const auto &a = out.samples[i - 1], &b = out.samples[i + 1];
    m.m_dot_fd = (b.m_value - a.m_value) / (b.t - a.t);
    m.interior = true;
    const double scale = std::max(std::abs(m.m_dot_fd), std::abs(m.terms.sum()));
    m.identity_residual = scale > 0 ? std::abs(m.m_dot_fd - m.terms.sum()) / scale : 0.0;
    out.max_identity_residual = std::max(out.max_identity_residual, m.identity_residual);
  }
  return out;
}

MorawetzSeries morawetz_series(const Trajectory& traj, const CutoffFamily& family, const MorawetzOptions& opt) {
  if (traj.radial()) fail(ErrorKind::Dimension, "Morawetz action needs a Cartesian trajectory");
  std::vector<FieldState> states;
  for (std::size_t i = 0; i < traj.size(); ++i) states.push_back(traj.state(i));
  return morawetz_series(states, family, traj.params(), opt, traj.tainted ? traj.taint_time : -1.0);
}

}  // namespace nls
