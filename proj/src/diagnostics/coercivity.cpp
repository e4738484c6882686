#include "nls/diagnostics/coercivity.hpp"

#include <cmath>
#include <limits>

#include "nls/core/error.hpp"

namespace nls {

namespace {

// Calls f(z, key) for every lattice point k·stride that can touch the state; key identifies
// |k|² so radial callers can memoize.
template <class F>
void for_each_z(const FieldState& s, double R, double stride, F&& f) {
  if (!(stride > 0)) fail(ErrorKind::Domain, "z stride must be positive");
  if (s.is_cartesian()) {
    const double L = s.cartesian().box_length();
    const long lo = long(std::ceil(-0.5 * L / stride)), hi = long(std::floor(0.5 * L / stride - 1e-12));
    for (long a = lo; a <= hi; ++a)
      for (long b = lo; b <= hi; ++b)
        for (long c = lo; c <= hi; ++c) f(Vec3{a * stride, b * stride, c * stride}, a * a + b * b + c * c);
    return;
  }
  const long k = long(std::floor((s.radial().r_max() + R) / stride));
  for (long a = -k; a <= k; ++a)
    for (long b = -k; b <= k; ++b)
      for (long c = -k; c <= k; ++c) {
        const long key = a * a + b * b + c * c;
        if (double(key) * stride * stride > (s.radial().r_max() + R) * (s.radial().r_max() + R)) continue;
        f(Vec3{a * stride, b * stride, c * stride}, key);
      }
}

// Lattice shells of a radial scan: every key |k|² with its number of lattice points.
// A radial state's localized integrals depend on z only through |z| (the current rotates
// with z, and the scan only uses rotation invariants of it).
std::vector<std::pair<long, long>> radial_shells(const FieldState& s, double R, double stride) {
  const double k = (s.radial().r_max() + R) / stride;
  std::vector<long> count(std::size_t(k * k) + 2, 0);
  for_each_z(s, R, stride, [&](const Vec3&, long key) { ++count[std::size_t(key)]; });
  std::vector<std::pair<long, long>> out;
  for (std::size_t key = 0; key < count.size(); ++key)
    if (count[key] > 0) out.emplace_back(long(key), count[key]);
  return out;
}

// Calls f(z, li, multiplicity) once per distinct localized value.
template <class F>
void for_each_local(const FieldState& s, const Localizer& loc, const CutoffFamily& fam, double R,
                    double stride, F&& f) {
  if (!loc.radial()) {
    for_each_z(s, R, stride, [&](const Vec3& z, long) { f(z, loc.at(fam, z), 1L); });
    return;
  }
  for (const auto& [key, n] : radial_shells(s, R, stride)) {
    const Vec3 z{0, 0, std::sqrt(double(key)) * stride};
    f(z, loc.at(fam, z), n);
  }
}

bool is_zero(const FieldState& s) {
  for (const auto& v : s.values)
    if (v != cplx(0, 0)) return false;
  return true;
}

double ball_points(const FieldState& s, double R) {
  if (s.is_radial()) return 10.0 * std::max(16.0, R / 0.02);
  const double h = s.cartesian().spacing();
  return 4.0 / 3.0 * M_PI * std::pow(R / h, 3);
}

double lattice_points(const FieldState& s, double R, double stride) {
  if (s.is_cartesian()) return std::pow(std::floor(s.cartesian().box_length() / stride) + 1, 3);
  // distinct keys only
  const double k = (s.radial().r_max() + R) / stride;
  return k * k;
}

}  // namespace

CoercivityScan coercivity_scan(const std::vector<FieldState>& states, const PhysParams& params,
                               const CoercivityOptions& opt) {
  CoercivityScan out;
  out.radii = opt.radii;
  out.min_per_radius.assign(opt.radii.size(), std::numeric_limits<double>::infinity());
  out.delta_hat = std::numeric_limits<double>::infinity();
  out.vacuous = true;
  for (const auto& s : states) {
    if (is_zero(s)) continue;
    out.vacuous = false;
    const Localizer loc(s, params.p, params.q);
    const double M = loc.total_mass();
    for (std::size_t ri = 0; ri < opt.radii.size(); ++ri) {
      const double R = opt.radii[ri];
      const auto fam = build_cutoff_profile(opt.eta, R, params.p, params.q);
      std::size_t kept = 0;
      for_each_local(s, loc, fam, R, opt.stride_factor * R, [&](const Vec3& z, const LocalIntegrals& li, long n) {
        if (!(li.mass > opt.mass_floor * M)) return;
        ++kept;
        out.evaluations += std::size_t(n);
        const Vec3 xi = optimal_xi(li, M);
        const auto v = localized_pohozaev(li, xi, params);
        if (opt.keep_points) out.points.push_back({s.time, z, R, xi, v});
        if (v.ratio < out.min_per_radius[ri]) out.min_per_radius[ri] = v.ratio;
        if (v.ratio < out.delta_hat) {
          out.delta_hat = v.ratio;
          out.argmin = {s.time, z, R, xi, v};
        }
      });
      if (kept == 0)
        fail(ErrorKind::Degenerate, "coercivity scan found no lattice point with localized mass at R = " +
                                        std::to_string(R));
    }
  }
  for (std::size_t i = 1; i < out.min_per_radius.size(); ++i)
    if (out.min_per_radius[i] < out.min_per_radius[i - 1] - opt.noise) out.monotone = false;
  return out;
}

CoercivityScan coercivity_scan(const Trajectory& traj, const CoercivityOptions& opt) {
  std::vector<FieldState> states;
  const std::size_t stride = std::max<std::size_t>(1, opt.sample_stride);
  for (std::size_t i = 0; i < traj.size(); i += stride) states.push_back(traj.state(i));
  return coercivity_scan(states, traj.params(), opt);
}

InteractionAverage averaged_interaction(const std::vector<double>& times,
                                        const std::vector<FieldState>& states,
                                        const PhysParams& params, const InteractionOptions& opt) {
  if (times.size() != states.size()) fail(ErrorKind::Precondition, "times and states differ in length");
  if (!(opt.r_lo > 0) || !(opt.r_hi >= opt.r_lo) || opt.n_r < 1)
    fail(ErrorKind::Domain, "averaged interaction needs 0 < R_lo <= R_hi and n_R >= 1");
  InteractionAverage out;
  std::vector<std::size_t> idx;
  const bool whole = !(opt.t_hi > opt.t_lo);
  for (std::size_t i = 0; i < times.size(); ++i)
    if (whole || (times[i] >= opt.t_lo - 1e-12 && times[i] <= opt.t_hi + 1e-12)) idx.push_back(i);
  if (idx.empty()) fail(ErrorKind::Precondition, "no samples inside the averaging window");
  out.window_lo = times[idx.front()];
  out.window_hi = times[idx.back()];
  out.samples = idx.size();

  std::vector<double> radii(opt.n_r);
  for (int k = 0; k < opt.n_r; ++k)
    radii[k] = opt.n_r == 1 ? opt.r_lo
                            : opt.r_lo * std::pow(opt.r_hi / opt.r_lo, double(k) / (opt.n_r - 1));

  double cost = 0;
  for (double R : radii)
    cost += lattice_points(states[idx[0]], R, opt.stride_factor * R) *
            (states[idx[0]].is_radial() ? 1.0 : ball_points(states[idx[0]], R)) *
            (states[idx[0]].is_radial() ? ball_points(states[idx[0]], R) : 1.0);
  cost *= double(idx.size());
  out.estimated_cost = cost;
  if (cost > opt.budget) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "averaged interaction refused: estimated %.3g point evaluations over %zu samples and "
                  "%d radii exceeds the budget %.3g",
                  cost, idx.size(), opt.n_r, opt.budget);
    fail(ErrorKind::Budget, buf);
  }

  // inner(t, R) = R⁻³ Σ_z stride³ mass_loc·K_ξ
  std::vector<double> per_t(idx.size(), 0.0);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    const auto& s = states[idx[a]];
    if (is_zero(s)) continue;
    const Localizer loc(s, params.p, params.q);
    const double M = loc.total_mass();
    std::vector<double> per_r(radii.size(), 0.0);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double R = radii[k], stride = opt.stride_factor * R;
      const auto fam = build_cutoff_profile(opt.eta, R, params.p, params.q);
      double sum = 0;
      for_each_local(s, loc, fam, R, stride, [&](const Vec3&, const LocalIntegrals& li, long n) {
        if (!(li.mass > 0)) return;
        out.z_points += std::size_t(n);
        sum += double(n) * li.mass * li.boosted_kinetic(optimal_xi(li, M));
      });
      per_r[k] = sum * stride * stride * stride / (R * R * R);
    }
    if (radii.size() == 1) {
      per_t[a] = per_r[0];
    } else {
      const double J = std::log(opt.r_hi / opt.r_lo), d = J / double(radii.size() - 1);
      double acc = 0;
      for (std::size_t k = 0; k + 1 < radii.size(); ++k) acc += 0.5 * d * (per_r[k] + per_r[k + 1]);
      per_t[a] = acc / J;
    }
  }
  if (idx.size() == 1) {
    out.value = per_t[0];
    return out;
  }
  double acc = 0;
  for (std::size_t a = 0; a + 1 < idx.size(); ++a)
    acc += 0.5 * (times[idx[a + 1]] - times[idx[a]]) * (per_t[a] + per_t[a + 1]);
  out.value = acc / (out.window_hi - out.window_lo);
  return out;
}

InteractionAverage averaged_interaction(const Trajectory& traj, const InteractionOptions& opt) {
  std::vector<double> times;
  std::vector<FieldState> states;
  const bool whole = !(opt.t_hi > opt.t_lo);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.samples[i].time;
    if (!whole && (t < opt.t_lo - 1e-12 || t > opt.t_hi + 1e-12)) continue;
    times.push_back(t);
    states.push_back(traj.state(i));
  }
  return averaged_interaction(times, states, traj.params(), opt);
}

}  // namespace nls
