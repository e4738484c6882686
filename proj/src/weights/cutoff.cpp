#include "nls/weights/cutoff.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "nls/core/convolution.hpp"
#include "nls/core/error.hpp"
#include "nls/weights/bridge.hpp"

namespace nls {

namespace {

using boost::math::quadrature::gauss_kronrod;

void check_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) fail(ErrorKind::Domain, "cutoff eta must lie in (0,1)");
}

double quintic(double x, double f0, double d0, double s0, double f1, double d1, double s1) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double h0 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
  const double h1 = x - 6 * x3 + 8 * x4 - 3 * x5;
  const double h2 = 0.5 * (x2 - 3 * x3 + 3 * x4 - x5);
  const double h3 = 0.5 * (x3 - 2 * x4 + x5);
  const double h4 = -4 * x3 + 7 * x4 - 3 * x5;
  const double h5 = 10 * x3 - 15 * x4 + 6 * x5;
  return f0 * h0 + d0 * h1 + s0 * h2 + s1 * h3 + d1 * h4 + f1 * h5;
}

template <class F>
double integrate_pieces(F&& f, std::vector<double> cuts, double a, double b) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double prev = a;
  for (double c : cuts) {
    if (c <= prev || c > b) continue;
    total += gauss_kronrod<double, 61>::integrate(f, prev, c, 8, 1e-12);
    prev = c;
  }
  return total;
}

// 30-point Gauss-Legendre on [a, b] split into `panels`, accumulating two integrands that
// share their evaluation point.
template <class F>
void gauss_pair(F&& f, double a, double b, int panels, double& out1, double& out2) {
  using rule = boost::math::quadrature::gauss<double, 30>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width, half = 0.5 * width, mid = lo + half;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int copies = x[i] == 0.0 ? 1 : 2;
      for (int sgn = 0; sgn < copies; ++sgn) {
        const double s = mid + (sgn ? -half : half) * x[i];
        const auto [v1, v2] = f(s);
        out1 += half * w[i] * v1;
        out2 += half * w[i] * v2;
      }
    }
  }
}

}  // namespace

ChiValue chi_profile(double eta, double r) {
  check_eta(eta);
  if (r <= 1.0 - eta) return {1.0, 0.0, 0.0};
  if (r >= 1.0) return {0.0, 0.0, 0.0};
  const auto b = weights::bridge((1.0 - r) / eta);
  return {b.s, -b.ds / eta, b.d2s / (eta * eta)};
}

double chi_derivative_constant(double eta, int samples) {
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double r = 1.0 - eta + eta * double(i) / samples;
    worst = std::max(worst, std::abs(chi_profile(eta, r).d1));
  }
  return worst * eta;
}

double CutoffProfiles::k(double t) const {
  const auto c = chi_profile(eta_, t);
  return t * c.v * c.v;
}

double CutoffProfiles::G(double t) const {
  const double a = 1.0 - eta_;
  if (t <= a) return 0.5 * t * t;
  if (t >= 1.0) return g_end_;
  const double x = (t - a) / g_h_;
  const int n = int(g_val_.size()) - 1;
  const int i = std::min(int(x), n - 1);
  const double h = g_h_;
  return quintic(x - i, g_val_[i], h * g_k_[i], h * h * g_dk_[i], g_val_[i + 1], h * g_k_[i + 1],
                 h * h * g_dk_[i + 1]);
}

CutoffProfiles::CutoffProfiles(double eta, double p, double q, int nodes)
    : eta_(eta), p_(p), q_(q), nodes_(nodes) {
  check_eta(eta);
  if (nodes < 64) fail(ErrorKind::Domain, "cutoff profile table needs at least 64 nodes");
  const double a = 1.0 - eta;

  const int ng = 2048;
  g_h_ = eta / ng;
  g_val_.assign(ng + 1, 0.0);
  g_val_[0] = 0.5 * a * a;
  auto kf = [&](double t) { return k(t); };
  for (int i = 0; i < ng; ++i) {
    const double t0 = a + i * g_h_;
    g_val_[i + 1] = g_val_[i] + gauss_kronrod<double, 31>::integrate(kf, t0, t0 + g_h_, 0, 0.0);
  }
  g_end_ = g_val_[ng];
  g_k_.resize(ng + 1);
  g_dk_.resize(ng + 1);
  for (int i = 0; i <= ng; ++i) {
    const double t = a + i * g_h_;
    const auto c = chi_profile(eta_, t);
    g_k_[i] = t * c.v * c.v;
    g_dk_[i] = c.v * c.v + 2.0 * t * c.v * c.d1;
  }

  dy_ = 2.0 / nodes;
  for (Table* t : {&phi_, &phi_p_, &phi_q_, &psi_}) {
    t->v.assign(nodes + 1, 0.0);
    t->d.assign(nodes + 1, 0.0);
  }
  for (int i = 0; i <= nodes; ++i) {
    const double y = i * dy_;
    const std::pair<Which, Table*> targets[] = {
        {Which::Phi, &phi_}, {Which::PhiP, &phi_p_}, {Which::PhiQ, &phi_q_}};
    for (auto [which, table] : targets) {
      const auto r = direct(which, y);
      table->v[i] = r.value;
      table->d[i] = r.derivative;
    }
  }
  // ψ = Q/y with Q = ∫₀^y Φ by the end-corrected trapezoid (exact for cubics)
  double Q = 0.0;
  psi_.v[0] = phi_.v[0];
  psi_.d[0] = 0.0;
  for (int i = 1; i <= nodes; ++i) {
    Q += 0.5 * dy_ * (phi_.v[i - 1] + phi_.v[i]) + dy_ * dy_ * (phi_.d[i - 1] - phi_.d[i]) / 12.0;
    const double y = i * dy_;
    psi_.v[i] = Q / y;
    psi_.d[i] = (phi_.v[i] - psi_.v[i]) / y;
  }
  tail_ = Q;
}

RadialValue CutoffProfiles::direct(Which which, double y) const {
  const double expo = which == Which::Phi ? 2.0 : which == Which::PhiP ? p_ + 1.0 : q_ + 1.0;
  auto f = [&](double s) { return std::pow(chi_profile(eta_, s).v, expo); };
  const double a = 1.0 - eta_;
  if (y >= 2.0) return {0.0, 0.0};
  if (y == 0.0) {
    auto integrand = [&](double s) {
      const double c = chi_profile(eta_, s).v;
      return s * s * f(s) * c * c;
    };
    return {3.0 * integrate_pieces(integrand, {a}, 0.0, 1.0), 0.0};
  }
  // Breakpoints where one factor enters or leaves its transition band; pieces inside a band
  // are at most η wide and get four panels per η, the rest are polynomial.
  std::vector<double> cuts{0.0, 1.0, a, a - y, 1.0 - y, y - a, y + a, y - 1.0, y + 1.0};
  std::sort(cuts.begin(), cuts.end());
  auto in_band = [&](double t) { return t > a && t < 1.0; };
  double I = 0.0, J = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = std::max(cuts[c], 0.0), hi = std::min(cuts[c + 1], 1.0);
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    const bool band = in_band(mid) || in_band(y + mid) || in_band(std::abs(y - mid));
    const int panels = band ? std::max(1, int(std::ceil(4.0 * (hi - lo) / eta_ - 1e-9))) : 1;
    gauss_pair(
        [&](double s) {
          const double fs = s * f(s);
          const double d = y - s;
          const double sg = d > 0 ? 1.0 : d < 0 ? -1.0 : 0.0;
          return std::pair{fs * (G(y + s) - G(std::abs(d))), fs * (k(y + s) - sg * k(std::abs(d)))};
        },
        lo, hi, panels, I, J);
  }
  const double v = 1.5 / y * I;
  return {v, -v / y + 1.5 / y * J};
}

RadialValue CutoffProfiles::eval(const Table& t, double y) const {
  y = std::abs(y);
  if (y >= 2.0) return {0.0, 0.0};
  const double x = y / dy_;
  const int i = std::min(int(x), nodes_ - 1);
  const double s = x - i;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2,
               h11 = s3 - s2;
  const double v = h00 * t.v[i] + h10 * dy_ * t.d[i] + h01 * t.v[i + 1] + h11 * dy_ * t.d[i + 1];
  const double e00 = 6 * s2 - 6 * s, e10 = 3 * s2 - 4 * s + 1, e01 = -6 * s2 + 6 * s,
               e11 = 3 * s2 - 2 * s;
  const double d =
      (e00 * t.v[i] + e01 * t.v[i + 1]) / dy_ + e10 * t.d[i] + e11 * t.d[i + 1];
  return {v, d};
}

RadialValue CutoffProfiles::psi(double y) const {
  y = std::abs(y);
  if (y >= 2.0) return {tail_ / y, -tail_ / (y * y)};
  return eval(psi_, y);
}

std::shared_ptr<const CutoffProfiles> CutoffProfiles::get(double eta, double p, double q) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const CutoffProfiles>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{eta, p, q}];
  if (!slot) slot = std::make_shared<const CutoffProfiles>(eta, p, q);
  return slot;
}

ChiValue CutoffFamily::chi_at(double r) const {
  const auto c = chi_profile(eta, r / radius);
  return {c.v, c.d1 / radius, c.d2 / (radius * radius)};
}

namespace {
RadialValue scaled(RadialValue v, double R) { return {v.value, v.derivative / R}; }
}  // namespace

RadialValue CutoffFamily::phi_at(double r) const { return scaled(profiles->phi(r / radius), radius); }
RadialValue CutoffFamily::phi_p_at(double r) const {
  return scaled(profiles->phi_p(r / radius), radius);
}
RadialValue CutoffFamily::phi_q_at(double r) const {
  return scaled(profiles->phi_q(r / radius), radius);
}
RadialValue CutoffFamily::psi_at(double r) const { return scaled(profiles->psi(r / radius), radius); }

CutoffFamily build_cutoff_profile(double eta, double radius, double p, double q) {
  check_eta(eta);
  if (!(radius > 0.0)) fail(ErrorKind::Domain, "cutoff radius must be positive");
  CutoffFamily f;
  f.eta = eta;
  f.radius = radius;
  f.profiles = CutoffProfiles::get(eta, p, q);
  return f;
}

CutoffFamily build_cutoff_family(double eta, double radius, const CartesianGrid& g, double p,
                                 double q) {
  CutoffFamily f = build_cutoff_profile(eta, radius, p, q);
  if (2.0 * radius > g.box_length() / 4.0)
    fail(ErrorKind::Geometry, "cutoff family needs 2R <= L/4 (R=" + std::to_string(radius) +
                                  ", L=" + std::to_string(g.box_length()) + ")");
  f.grid = g;
  const std::size_t N = g.size();
  for (RField* t : {&f.chi, &f.phi, &f.phi_p, &f.phi_q, &f.psi, &f.grad_phi, &f.grad_psi})
    t->assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const Vec3 x = g.position(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    f.chi[i] = f.chi_at(r).v;
    const auto ph = f.phi_at(r);
    f.phi[i] = ph.value;
    f.grad_phi[i] = std::abs(ph.derivative);
    f.phi_p[i] = f.phi_p_at(r).value;
    f.phi_q[i] = f.phi_q_at(r).value;
    const auto ps = f.psi_at(r);
    f.psi[i] = ps.value;
    f.grad_psi[i] = std::abs(ps.derivative);
  }
  return f;
}

std::vector<CutoffProperty> verify_cutoff_properties(const CutoffFamily& f) {
  if (!f.tabulated()) fail(ErrorKind::Precondition, "verify_cutoff_properties needs a tabulated family");
  const CartesianGrid& g = *f.grid;
  const double R = f.radius, eta = f.eta;

  // Constants valid for any admissible χ (see README): ψ <= 2min{1,R/|x|}, |φ−φ_p| <= 3η,
  // |∇φ| <= 3/(ηR), |ψ−φ| <= (2/η)min{|x|/R, R/|x|}, |∇ψ| <= (2/η)min{1/R, R/|x|²}.
  struct Acc {
    std::string name;
    double pinned;
    double margin = INFINITY, location = 0.0, fitted = 0.0;
    void add(double lhs, double shape, double r) {
      const double m = pinned * shape - lhs;
      if (m < margin) {
        margin = m;
        location = r;
      }
      if (shape > 0) fitted = std::max(fitted, lhs / shape);
    }
    void add_sign(double value, double r) {
      if (value < margin) {
        margin = value;
        location = r;
      }
    }
  };
  Acc psi_bound{"psi_bound", 2.0};
  Acc psi_phi_sign{"psi_minus_phi_nonneg", 0.0};
  Acc phi_q_sign{"phi_minus_phi_q_nonneg", 0.0};
  Acc phi_p_eta{"phi_minus_phi_p_eta", 3.0};
  Acc grad_phi{"grad_phi_bound", 3.0};
  Acc psi_phi_bound{"psi_minus_phi_bound", 2.0};
  Acc grad_psi{"grad_psi_bound", 2.0};

  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 x = g.position(i);
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double psi = f.psi[i], phi = f.phi[i];
    psi_bound.add(std::abs(psi), r > R ? R / r : 1.0, r);
    psi_phi_sign.add_sign(psi - phi, r);
    phi_q_sign.add_sign(phi - f.phi_q[i], r);
    phi_p_eta.add(std::abs(phi - f.phi_p[i]), eta, r);
    grad_phi.add(f.grad_phi[i], 1.0 / (eta * R), r);
    psi_phi_bound.add(std::abs(psi - phi), std::min(r / R, r > 0 ? R / r : INFINITY) / eta, r);
    grad_psi.add(f.grad_psi[i], (r > 0 ? std::min(1.0 / R, R / (r * r)) : 1.0 / R) / eta, r);
  }
  std::vector<CutoffProperty> out;
  for (const Acc* a : {&psi_bound, &psi_phi_sign, &phi_q_sign, &phi_p_eta, &grad_phi,
                       &psi_phi_bound, &grad_psi}) {
    out.push_back({a->name, a->margin, a->fitted, a->pinned, a->location});
  }
  return out;
}

FftCrossCheck fft_cross_check(const CutoffFamily& f) {
  if (!f.tabulated()) fail(ErrorKind::Precondition, "fft_cross_check needs a tabulated family");
  const CartesianGrid& g = *f.grid;
  const std::size_t N = g.size();
  const double norm = 1.0 / (4.0 * std::numbers::pi / 3.0 * std::pow(f.radius, 3));
  RField chi2(N), chip(N), chiq(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double c = f.chi[i];
    chi2[i] = c * c;
    chip[i] = std::pow(c, f.profiles->p() + 1.0);
    chiq[i] = std::pow(c, f.profiles->q() + 1.0);
  }
  auto deviation = [&](const RField& other, const RField& table, RField* keep) {
    auto res = fft_convolve(g, other, chi2);
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      res.values[i] *= norm;
      worst = std::max(worst, std::abs(res.values[i] - table[i]));
    }
    if (keep) *keep = std::move(res.values);
    return worst;
  };
  FftCrossCheck out{};
  RField phi_fft;
  out.phi = deviation(chi2, f.phi, &phi_fft);
  out.phi_p = deviation(chip, f.phi_p, nullptr);
  out.phi_q = deviation(chiq, f.phi_q, nullptr);
  // compare each point with its images under axis permutations and reflections through
  // the origin node (index n/2), which all share one radius
  const int n = g.n();
  double spread = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const auto [a, b, c] = g.unravel(i);
    if (a == 0 || b == 0 || c == 0) continue;
    const int ma = n - a, mb = n - b, mc = n - c;
    for (std::size_t j : {g.index(b, c, a), g.index(c, a, b), g.index(ma, b, c), g.index(a, mb, c),
                          g.index(a, b, mc), g.index(ma, mb, mc)})
      spread = std::max(spread, std::abs(phi_fft[i] - phi_fft[j]));
  }
  out.angular_spread = spread;
  return out;
}

std::string cutoff_csv_header() { return "property,worst_margin,fitted_constant,location"; }

std::string to_csv_row(const CutoffProperty& p) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g", p.property.c_str(), p.worst_margin,
                p.fitted_constant, p.location);
  return buf;
}

}  // namespace nls
