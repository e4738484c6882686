#include "nls/diagnostics/invariance.hpp"

#include <cmath>
#include <limits>

#include "nls/core/error.hpp"

namespace nls {

namespace {

void require_reports(const Trajectory& traj) {
  if (traj.reports.empty()) fail(ErrorKind::Precondition, "invariance check needs a trajectory with samples");
}

}  // namespace

InvarianceReport check_aplus_invariance(const Trajectory& traj, double m_omega) {
  require_reports(traj);
  const PhysParams& P = traj.params();
  if (!(P.q > 7.0 / 3.0)) fail(ErrorKind::Domain, "gradient bound in A+ needs q > 7/3");
  InvarianceReport out;
  out.expected = Membership::APlus;
  out.action_gap = m_omega - traj.reports.front().action;
  const double bound = 6.0 * (P.q - 1) / (3.0 * P.q - 7.0) * m_omega;
  out.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : traj.reports) {
    InvarianceSample s;
    s.t = r.time;
    s.membership = membership_of(r, m_omega);
    s.pohozaev = r.pohozaev;
    s.kinetic = r.kinetic;
    s.bound = bound;
    s.slack = bound - r.kinetic;
    if (s.membership != Membership::APlus && out.membership_kept) {
      out.membership_kept = false;
      out.failure = "left A+ at t = " + std::to_string(s.t);
    }
    out.min_slack = std::min(out.min_slack, s.slack);
    out.samples.push_back(s);
  }
  out.holds = out.membership_kept && out.min_slack >= 0.0;
  if (out.membership_kept && !out.holds) out.failure = "gradient bound violated";
  return out;
}

InvarianceReport check_aminus_invariance(const Trajectory& traj, double m_omega, double relative_tol) {
  require_reports(traj);
  const PhysParams& P = traj.params();
  InvarianceReport out;
  out.expected = Membership::AMinus;
  out.action_gap = m_omega - traj.reports.front().action;
  const double bound = -1.5 * (P.p - 1) * out.action_gap;
  const double strong = -0.75 * (P.p - 1) * out.action_gap;
  out.min_slack = std::numeric_limits<double>::infinity();
  out.worst_relative = std::numeric_limits<double>::infinity();
  out.delta_max = std::numeric_limits<double>::infinity();
  bool within = true;
  for (const auto& r : traj.reports) {
    InvarianceSample s;
    s.t = r.time;
    s.membership = membership_of(r, m_omega);
    s.pohozaev = r.pohozaev;
    s.kinetic = r.kinetic;
    s.bound = bound;
    s.slack = bound - r.pohozaev;
    if (s.membership != Membership::AMinus && out.membership_kept) {
      out.membership_kept = false;
      out.failure = "left A- at t = " + std::to_string(s.t);
    }
    out.min_slack = std::min(out.min_slack, s.slack);
    const double rel = s.slack / std::max(std::abs(r.pohozaev), 1e-300);
    out.worst_relative = std::min(out.worst_relative, rel);
    if (rel < -relative_tol) within = false;
    if (r.kinetic > 0) out.delta_max = std::min(out.delta_max, (strong - r.pohozaev) / r.kinetic);
    out.samples.push_back(s);
  }
  out.holds = out.membership_kept && within && out.delta_max > 0 && out.action_gap > 0;
  if (out.membership_kept && !out.holds)
    out.failure = !within ? "Pohozaev bound violated beyond the tolerance" : "no positive delta";
  return out;
}

}  // namespace nls
