#include "nls/diagnostics/virial.hpp"

#include <algorithm>
#include <cmath>

#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"
#include "nls/core/spectral.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

VirialValues virial_values(const FieldState& s, const VirialWeight& w, const PhysParams& params) {
  require_same_grid(s.grid, w.grid, "virial weight");
  const double p = params.p, q = params.q;
  const std::size_t n = s.size();
  RField fv(n), fd(n), fdd(n);
  const double cq = 2.0 * (q - 1) / (q + 1), cp = 2.0 * (p - 1) / (p + 1);
  if (s.is_radial()) {
    const auto& g = s.radial();
    RField re(n), im(n);
    for (std::size_t j = 0; j < n; ++j) {
      re[j] = s.values[j].real();
      im[j] = s.values[j].imag();
    }
    const RField dre = radial::derivative(g, re), dim = radial::derivative(g, im);
    for (std::size_t j = 0; j < n; ++j) {
      const double a2 = std::norm(s.values[j]);
      fv[j] = w.phi[j] * a2;
      fd[j] = 2.0 * w.grad[0][j] * (re[j] * dim[j] - im[j] * dre[j]);
      fdd[j] = -w.bilaplacian[j] * a2 + 4.0 * w.hessian[0][j] * (dre[j] * dre[j] + dim[j] * dim[j]) +
               w.laplacian[j] * (cq * abs_pow(a2, q + 1) - cp * abs_pow(a2, p + 1));
    }
  } else {
    const auto du = spectral::gradient(s);
    // hessian slots: xx, xy, xz, yy, yz, zz
    static constexpr int slot[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    for (std::size_t i = 0; i < n; ++i) {
      const cplx u = s.values[i];
      const double a2 = std::norm(u);
      fv[i] = w.phi[i] * a2;
      double cur = 0, hess = 0;
      for (int a = 0; a < 3; ++a) {
        cur += w.grad[a][i] * (std::conj(u) * du[a][i]).imag();
        for (int b = 0; b < 3; ++b)
          hess += w.hessian[slot[a][b]][i] * (du[a][i] * std::conj(du[b][i])).real();
      }
      fd[i] = 2.0 * cur;
      fdd[i] = -w.bilaplacian[i] * a2 + 4.0 * hess +
               w.laplacian[i] * (cq * abs_pow(a2, q + 1) - cp * abs_pow(a2, p + 1));
    }
  }
  VirialValues out;
  out.v = integrate(s.grid, fv);
  out.v_dot = integrate(s.grid, fd);
  out.v_ddot = integrate(s.grid, fdd);
  const auto rep = report(s, params);
  out.pohozaev = rep.pohozaev;
  out.kinetic = rep.kinetic;
  return out;
}

VirialSeries virial_series(const std::vector<FieldState>& states, const VirialWeight& weight,
                           const PhysParams& params) {
  VirialSeries out(weight);
  for (const auto& s : states) {
    const auto v = virial_values(s, weight, params);
    out.times.push_back(s.time);
    out.v.push_back(v.v);
    out.v_dot.push_back(v.v_dot);
    out.v_ddot.push_back(v.v_ddot);
    out.g_pohozaev.push_back(v.pohozaev);
    out.kinetic.push_back(v.kinetic);
  }
  return out;
}

VirialSeries virial_series(const Trajectory& traj, const VirialWeight& weight) {
  VirialSeries out(weight);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto v = virial_values(traj.state(i), weight, traj.params());
    out.times.push_back(traj.samples[i].time);
    out.v.push_back(v.v);
    out.v_dot.push_back(v.v_dot);
    out.v_ddot.push_back(v.v_ddot);
    out.g_pohozaev.push_back(v.pohozaev);
    out.kinetic.push_back(v.kinetic);
  }
  return out;
}

VirialFdCheck virial_fd_check(const VirialSeries& s, std::size_t every) {
  every = std::max<std::size_t>(1, every);
  VirialFdCheck out;
  const std::size_t n = s.times.size();
  if (n < 2 * every + 1) fail(ErrorKind::Precondition, "finite-difference check needs three samples");
  out.spacing = s.times[every] - s.times[0];
  double scale1 = 0, scale2 = 0;
  for (std::size_t i = 0; i < n; i += every) {
    scale1 = std::max(scale1, std::abs(s.v_dot[i]));
    scale2 = std::max(scale2, std::abs(s.v_ddot[i]));
  }
  for (std::size_t i = every; i + every < n; i += every) {
    const double d1 = s.times[i] - s.times[i - every], d2 = s.times[i + every] - s.times[i];
    if (std::abs(d1 - d2) > 1e-9 * std::max(d1, d2))
      fail(ErrorKind::Precondition, "finite-difference check needs uniformly spaced samples");
    const double h = d1;
    const double first = (s.v[i + every] - s.v[i - every]) / (2 * h);
    const double second = (s.v[i + every] - 2 * s.v[i] + s.v[i - every]) / (h * h);
    out.first = std::max(out.first, std::abs(first - s.v_dot[i]) / std::max(scale1, 1e-300));
    out.second = std::max(out.second, std::abs(second - s.v_ddot[i]) / std::max(scale2, 1e-300));
    ++out.points;
  }
  return out;
}

double virial_identity_residual(const VirialSeries& s) {
  double worst = 0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double g8 = 8.0 * s.g_pohozaev[i];
    worst = std::max(worst, std::abs(s.v_ddot[i] - g8) / (std::abs(g8) + 1e-12));
  }
  return worst;
}

namespace {

double correction_basis(const VirialSeries& s, std::size_t i, const PhysParams& params) {
  const double rho = s.weight.rho, p = params.p;
  const double grad = std::sqrt(std::max(0.0, s.kinetic[i]));
  if (s.weight.kind == VirialKind::CylindricalRho)
    return std::pow(rho, -2.0) + std::pow(rho, -(p - 1) / 2) * std::pow(grad, p - 1);
  return std::pow(rho, -2.0) + std::pow(rho, -(p - 1)) * std::pow(grad, (p - 1) / 2);
}

}  // namespace

VirialEstimate virial_estimate_check(const VirialSeries& calibration, const VirialSeries& evaluation,
                                     const PhysParams& params) {
  if (calibration.weight.kind != evaluation.weight.kind || calibration.weight.rho != evaluation.weight.rho)
    fail(ErrorKind::Precondition, "calibration and evaluation series use different weights");
  VirialEstimate out;
  out.rho = evaluation.weight.rho;
  const bool quadratic = evaluation.weight.kind == VirialKind::Quadratic;
  if (!quadratic) {
    for (std::size_t i = 0; i < calibration.times.size(); ++i) {
      const double excess = calibration.v_ddot[i] - 8.0 * calibration.g_pohozaev[i];
      out.constant = std::max(out.constant, excess / correction_basis(calibration, i, params));
    }
  }
  out.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < evaluation.times.size(); ++i) {
    const double rhs = 8.0 * evaluation.g_pohozaev[i] +
                       (quadratic ? 0.0 : out.constant * correction_basis(evaluation, i, params));
    out.times.push_back(evaluation.times[i]);
    out.slack.push_back(rhs - evaluation.v_ddot[i]);
    out.rho2_term.push_back(quadratic ? 0.0 : out.constant / (out.rho * out.rho));
    out.min_slack = std::min(out.min_slack, out.slack.back());
  }
  return out;
}

VirialEstimate virial_estimate_check(const Trajectory& traj, const VirialWeight& weight) {
  const bool radial = traj.radial();
  if (weight.kind == VirialKind::RadialRho && !radial)
    fail(ErrorKind::Domain, "radial virial estimate applied to a non-radial run");
  if (weight.kind == VirialKind::CylindricalRho && radial)
    fail(ErrorKind::Domain, "cylindrical virial estimate applied to a radial run");
  const auto series = virial_series(traj, weight);
  return virial_estimate_check(series, series, traj.params());
}

}  // namespace nls
