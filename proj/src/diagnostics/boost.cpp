#include "nls/diagnostics/boost.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "nls/core/error.hpp"
#include "nls/core/quadrature.hpp"
#include "nls/core/radial.hpp"
#include "nls/core/spectral.hpp"
#include "nls/functionals/report.hpp"

namespace nls {

SnappedXi snap_to_lattice(const CartesianGrid& g, const Vec3& xi) {
  const double dk = 2.0 * M_PI / g.box_length();
  SnappedXi out{};
  double d2 = 0;
  for (int a = 0; a < 3; ++a) {
    out.xi[a] = dk * std::round(xi[a] / dk);
    d2 += (xi[a] - out.xi[a]) * (xi[a] - out.xi[a]);
  }
  out.distance = std::sqrt(d2);
  return out;
}

BoostedState galilean_boost(const FieldState& s, const Vec3& xi) {
  if (!s.is_cartesian())
    fail(ErrorKind::Dimension, "galilean boost breaks radial symmetry; needs a Cartesian state");
  const auto& g = s.cartesian();
  const auto snap = snap_to_lattice(g, xi);
  FieldState out = s;
  const int n = g.n();
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const double ph = snap.xi[0] * g.coord(ix) + snap.xi[1] * g.coord(iy) + snap.xi[2] * g.coord(iz);
        out.values[g.index(ix, iy, iz)] *= std::polar(1.0, ph);
      }
  return {std::move(out), snap.xi, snap.distance};
}

double LocalIntegrals::boosted_kinetic(const Vec3& xi) const {
  double k = kinetic;
  for (int a = 0; a < 3; ++a) k += 2.0 * xi[a] * current[a] + xi[a] * xi[a] * mass;
  return k;
}

namespace {

// Cumulative ∫₀^s F on the nodes s_j = j h (j = 0..m) for an odd integrand with F(s_{m+1}) = 0,
// interior intervals by the four-point rule; queried between nodes by cubic Hermite.
struct Cumulative {
  double h = 0;
  std::vector<double> F, C;

  Cumulative() = default;
  Cumulative(double h_, std::vector<double> f) : h(h_), F(std::move(f)), C(F.size(), 0.0) {
    const std::size_t m = F.size() - 1;
    auto at = [&](long j) -> double {
      if (j < 0) return -F[std::size_t(-j)];
      if (std::size_t(j) > m) return 0.0;
      return F[std::size_t(j)];
    };
    for (std::size_t j = 0; j < m; ++j) {
      const long i = long(j);
      C[j + 1] = C[j] + h * (-at(i - 1) + 13.0 * at(i) + 13.0 * at(i + 1) - at(i + 2)) / 24.0;
    }
  }

  double operator()(double s) const {
    const std::size_t m = F.size() - 1;
    if (s <= 0) return 0.0;
    const double x = s / h;
    if (x >= double(m)) return C[m];
    const std::size_t j = std::size_t(x);
    const double t = x - double(j), t2 = t * t, t3 = t2 * t;
    return C[j] * (2 * t3 - 3 * t2 + 1) + h * F[j] * (t3 - 2 * t2 + t) +
           C[j + 1] * (-2 * t3 + 3 * t2) + h * F[j + 1] * (t3 - t2);
  }

  // F itself by four-point Lagrange interpolation
  double integrand(double s) const {
    const long m = long(F.size()) - 1;
    if (s <= 0) return 0.0;
    const double x = s / h;
    if (x >= double(m)) return 0.0;
    long j = long(x) - 1;
    auto at = [&](long i) -> double {
      if (i < 0) return -F[std::size_t(-i)];
      if (i > m) return 0.0;
      return F[std::size_t(i)];
    };
    const double t = x - double(j);
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0, l1 = t * (t - 2) * (t - 3) / 2.0,
                 l2 = -t * (t - 1) * (t - 3) / 2.0, l3 = t * (t - 1) * (t - 2) / 6.0;
    return l0 * at(j) + l1 * at(j + 1) + l2 * at(j + 2) + l3 * at(j + 3);
  }
};

}  // namespace

struct Localizer::Impl {
  double p, q;
  // Cartesian
  std::optional<CartesianGrid> grid;
  CField u;
  std::array<CField, 3> grad;
  // radial: s·g tables for g = |u|², |u'|², |u|^{q+1}, |u|^{p+1}; j and s²·j for j = Im(ū u')
  Cumulative rho, grad2, lq, lp, cur0, cur2;
  double r_max = 0;

  LocalIntegrals cartesian_at(const CutoffFamily& fam, const Vec3& z) const;
  LocalIntegrals radial_at(const CutoffFamily& fam, const Vec3& z) const;
};

Localizer::Localizer(const FieldState& s, double p, double q) : impl_(std::make_unique<Impl>()) {
  s.check_finite();
  impl_->p = p;
  impl_->q = q;
  total_mass_ = mass(s);
  radial_ = s.is_radial();
  if (s.is_cartesian()) {
    impl_->grid = s.cartesian();
    impl_->u = s.values;
    impl_->grad = spectral::gradient(s);
    return;
  }
  const auto& g = s.radial();
  const std::size_t m = g.size();
  RField re(m), im(m);
  for (std::size_t j = 0; j < m; ++j) {
    re[j] = s.values[j].real();
    im[j] = s.values[j].imag();
  }
  const RField dre = radial::derivative(g, re), dim = radial::derivative(g, im);
  const double h = g.spacing();
  std::vector<double> f_rho(m + 1, 0.0), f_grad(m + 1, 0.0), f_lq(m + 1, 0.0), f_lp(m + 1, 0.0),
      f_c0(m + 1, 0.0), f_c2(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double r = g.r(j);
    const double a2 = std::norm(s.values[j]);
    f_rho[j + 1] = r * a2;
    f_grad[j + 1] = r * (dre[j] * dre[j] + dim[j] * dim[j]);
    f_lq[j + 1] = r * abs_pow(a2, q + 1);
    f_lp[j + 1] = r * abs_pow(a2, p + 1);
    const double jj = re[j] * dim[j] - im[j] * dre[j];
    f_c0[j + 1] = jj;
    f_c2[j + 1] = r * r * jj;
  }
  impl_->rho = Cumulative(h, std::move(f_rho));
  impl_->grad2 = Cumulative(h, std::move(f_grad));
  impl_->lq = Cumulative(h, std::move(f_lq));
  impl_->lp = Cumulative(h, std::move(f_lp));
  impl_->cur0 = Cumulative(h, std::move(f_c0));
  impl_->cur2 = Cumulative(h, std::move(f_c2));
  impl_->r_max = g.r_max();
}

Localizer::~Localizer() = default;
Localizer::Localizer(Localizer&&) noexcept = default;

LocalIntegrals Localizer::at(const CutoffFamily& family, const Vec3& z) const {
  return radial_ ? impl_->radial_at(family, z) : impl_->cartesian_at(family, z);
}

LocalIntegrals Localizer::Impl::cartesian_at(const CutoffFamily& fam, const Vec3& z) const {
  const auto& g = *grid;
  const double R = fam.radius, h = g.spacing(), L = g.box_length();
  const int n = g.n();
  const int reach = int(std::ceil(R / h));
  if (2 * reach + 1 > n)
    fail(ErrorKind::Geometry, "cutoff ball of radius " + std::to_string(R) + " does not fit the box");
  int center[3];
  for (int a = 0; a < 3; ++a) {
    double c = (z[a] + 0.5 * L) / h;
    c -= double(n) * std::floor(c / double(n));
    center[a] = int(std::lround(c)) % n;
  }
  auto disp = [&](int a, int d, int& idx) {
    idx = ((center[a] + d) % n + n) % n;
    double x = g.coord(center[a]) + d * h - z[a];
    // the nearest index may sit across the periodic seam from z
    x -= L * std::round(x / L);
    return x;
  };
  LocalIntegrals out;
  double cur[3] = {0, 0, 0};
  for (int dz = -reach; dz <= reach; ++dz) {
    int iz;
    const double wz = disp(2, dz, iz);
    for (int dy = -reach; dy <= reach; ++dy) {
      int iy;
      const double wy = disp(1, dy, iy);
      for (int dx = -reach; dx <= reach; ++dx) {
        int ix;
        const double wx = disp(0, dx, ix);
        const double t = std::sqrt(wx * wx + wy * wy + wz * wz);
        if (t >= R) continue;
        const ChiValue c = fam.chi_at(t);
        if (c.v == 0.0) continue;
        const std::size_t i = g.index(ix, iy, iz);
        const cplx v = u[i];
        const double a2 = std::norm(v);
        const double c2 = c.v * c.v;
        out.mass += c2 * a2;
        // |∇(χu)|² pointwise; its integral is ∫χ²|∇u|² − ∫χΔχ|u|²
        const double e = t > 0 ? c.d1 / t : 0.0;
        const double w[3] = {wx, wy, wz};
        for (int a = 0; a < 3; ++a) {
          cur[a] += c2 * (std::conj(v) * grad[a][i]).imag();
          out.kinetic += std::norm(c.v * grad[a][i] + v * (e * w[a]));
        }
        out.lq += abs_pow(c2 * a2, q + 1);
        out.lp += abs_pow(c2 * a2, p + 1);
      }
    }
  }
  const double dv = g.cell_volume();
  out.mass *= dv;
  out.kinetic *= dv;
  out.lq *= dv;
  out.lp *= dv;
  for (int a = 0; a < 3; ++a) out.current[a] = cur[a] * dv;
  return out;
}

LocalIntegrals Localizer::Impl::radial_at(const CutoffFamily& fam, const Vec3& zv) const {
  using GL = boost::math::quadrature::gauss<double, 10>;
  const double R = fam.radius;
  const double z = std::sqrt(zv[0] * zv[0] + zv[1] * zv[1] + zv[2] * zv[2]);
  LocalIntegrals out;
  if (z >= R + r_max) return out;
  const double width = std::min(0.02, fam.eta * R / 8.0);
  const int panels = std::max(16, int(std::ceil(R / width)));
  const double pw = R / panels;
  double mass_ = 0, kin = 0, lq_ = 0, lp_ = 0, curz = 0;
  const bool centered = z < 1e-12;
  const auto& x = GL::abscissa();
  const auto& w = GL::weights();
  auto node = [&](double t, double wt) {
    const ChiValue c = fam.chi_at(t);
    if (c.v == 0.0) return;
    const double lap = c.d2 + 2.0 * c.d1 / t;
    const double c2 = c.v * c.v;
    const double fq = std::pow(c.v, q + 1), fp = std::pow(c.v, p + 1);
    if (centered) {
      // ∫f(|x|)g(|x|)dx = 4π∫t² f g with g = F/t
      const double s = 4.0 * M_PI * t * wt;
      mass_ += s * c2 * rho.integrand(t);
      kin += s * (c2 * grad2.integrand(t) - c.v * lap * rho.integrand(t));
      lq_ += s * fq * lq.integrand(t);
      lp_ += s * fp * lp.integrand(t);
      return;
    }
    const double hi = z + t, lo = std::abs(z - t);
    const double s = 2.0 * M_PI * t * wt / z;
    const double dr = rho(hi) - rho(lo);
    mass_ += s * c2 * dr;
    kin += s * (c2 * (grad2(hi) - grad2(lo)) - c.v * lap * dr);
    lq_ += s * fq * (lq(hi) - lq(lo));
    lp_ += s * fp * (lp(hi) - lp(lo));
    curz += s * c2 * ((cur2(hi) - cur2(lo)) + (z * z - t * t) * (cur0(hi) - cur0(lo))) / (2.0 * z);
  };
  for (int k = 0; k < panels; ++k) {
    const double a = k * pw, mid = a + 0.5 * pw, half = 0.5 * pw;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) {
        node(mid, w[i] * half);
      } else {
        node(mid + half * x[i], w[i] * half);
        node(mid - half * x[i], w[i] * half);
      }
    }
  }
  out.mass = mass_;
  out.kinetic = kin;
  out.lq = lq_;
  out.lp = lp_;
  if (!centered)
    for (int a = 0; a < 3; ++a) out.current[a] = curz * zv[a] / z;
  return out;
}

Vec3 optimal_xi(const LocalIntegrals& loc, double total_mass) {
  if (!(loc.mass >= 1e-14 * total_mass) || loc.mass <= 0.0) return {0, 0, 0};
  return {-loc.current[0] / loc.mass, -loc.current[1] / loc.mass, -loc.current[2] / loc.mass};
}

Vec3 optimal_xi(const FieldState& s, const CutoffFamily& family, const Vec3& z) {
  const Localizer loc(s, 3.0, 3.0);
  return optimal_xi(loc.at(family, z), loc.total_mass());
}

bool LocalizedPohozaev::sentinel() const { return std::isinf(ratio); }

LocalizedPohozaev localized_pohozaev(const LocalIntegrals& loc, const Vec3& xi, const PhysParams& params) {
  LocalizedPohozaev out;
  out.grad_sq_loc = loc.boosted_kinetic(xi);
  out.g_loc = out.grad_sq_loc + params.cq() * loc.lq - params.cp() * loc.lp;
  out.ratio = out.grad_sq_loc < 1e-20 ? std::numeric_limits<double>::infinity()
                                      : out.g_loc / out.grad_sq_loc;
  return out;
}

LocalizedPohozaev localized_pohozaev(const FieldState& s, const CutoffFamily& family, const Vec3& z,
                                     const Vec3& xi, const PhysParams& params) {
  auto boosted = galilean_boost(s, xi);
  const auto& g = s.cartesian();
  const double R = family.radius, L = g.box_length();
  if (2.0 * R >= L) fail(ErrorKind::Geometry, "cutoff support does not fit the box");
  FieldState w = std::move(boosted.state);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Vec3 x = g.position(i);
    double d2 = 0;
    for (int a = 0; a < 3; ++a) {
      double d = x[a] - z[a];
      d -= L * std::round(d / L);
      d2 += d * d;
    }
    w.values[i] *= family.chi_at(std::sqrt(d2)).v;
  }
  const auto rep = report(w, params);
  LocalizedPohozaev out;
  out.grad_sq_loc = rep.kinetic;
  out.g_loc = rep.pohozaev;
  out.ratio = out.grad_sq_loc < 1e-20 ? std::numeric_limits<double>::infinity()
                                      : out.g_loc / out.grad_sq_loc;
  return out;
}

}  // namespace nls
