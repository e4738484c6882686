#include "nls/variational/classify.hpp"

#include <cmath>
#include <limits>

#include "nls/core/error.hpp"

namespace nls {

const char* to_string(Membership m) {
  switch (m) {
    case Membership::APlus: return "APlus";
    case Membership::AMinus: return "AMinus";
    case Membership::Neither: return "Neither";
  }
  return "Neither";
}

Membership membership_of(const FunctionalReport& r, double m_omega) {
  if (!(r.action < m_omega)) return Membership::Neither;
  return r.pohozaev >= 0 ? Membership::APlus : Membership::AMinus;
}

namespace {

FieldState coarsen(const FieldState& s) {
  if (s.is_cartesian()) {
    const auto& g = s.cartesian();
    const int n = g.n() / 2;
    CartesianGrid c(n, g.box_length());
    FieldState out(c, s.time);
    for (int iz = 0; iz < n; ++iz)
      for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) out.values[c.index(ix, iy, iz)] = s.values[g.index(2 * ix, 2 * iy, 2 * iz)];
    return out;
  }
  const auto& g = s.radial();
  RadialGrid c(g.r_max(), g.m() / 2);
  FieldState out(c, s.time);
  // coarse node j sits at r = (j+1)·2dr, i.e. fine index 2j+1
  for (std::size_t j = 0; j < c.size(); ++j) out.values[j] = s.values[2 * j + 1];
  return out;
}

}  // namespace

ClassificationResult classify(const FieldState& s, const PhysParams& params, double m_omega, RadialKinetic rk) {
  if (!(m_omega > 0)) fail(ErrorKind::Domain, "classify needs m_omega > 0");
  ClassificationResult out;
  out.report = report(s, params, rk);
  out.action_margin = m_omega - out.report.action;
  out.pohozaev_value = out.report.pohozaev;
  out.membership = membership_of(out.report, m_omega);

  bool coarse_ok = s.is_cartesian() ? s.cartesian().n() >= 8 : s.radial().m() >= 16;
  if (coarse_ok) {
    const FunctionalReport c = report(coarsen(s), params, rk);
    out.action_error = std::abs(out.report.action - c.action) / 3.0;
    out.pohozaev_error = std::abs(out.report.pohozaev - c.pohozaev) / 3.0;
  }
  const double tiny = std::numeric_limits<double>::min();
  out.confidence = std::min(std::abs(out.action_margin) / std::max(out.action_error, tiny),
                            std::abs(out.pohozaev_value) / std::max(out.pohozaev_error, tiny));
  return out;
}

}  // namespace nls
