#include "nls/weights/virial_weight.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "nls/core/error.hpp"
#include "nls/weights/bridge.hpp"

namespace nls {

const char* to_string(VirialKind k) {
  switch (k) {
    case VirialKind::Quadratic: return "quadratic";
    case VirialKind::RadialRho: return "radial";
    case VirialKind::CylindricalRho: return "cylindrical";
  }
  return "?";
}

VirialKind parse_virial_kind(const std::string& s) {
  if (s == "quadratic") return VirialKind::Quadratic;
  if (s == "radial") return VirialKind::RadialRho;
  if (s == "cylindrical") return VirialKind::CylindricalRho;
  fail(ErrorKind::Usage, "unknown virial weight '" + s + "'");
}

namespace {

using boost::math::quadrature::gauss_kronrod;

struct Theta {
  double v, d1, d2;
};
// θ(s) = 2·bridge(2 − s)
Theta theta(double s) {
  const auto b = weights::bridge(2.0 - s);
  return {2.0 * b.s, -2.0 * b.ds, 2.0 * b.d2s};
}

double quintic(double x, double f0, double d0, double s0, double f1, double d1, double s1) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  return f0 * (1 - 10 * x3 + 15 * x4 - 6 * x5) + d0 * (x - 6 * x3 + 8 * x4 - 3 * x5) +
         s0 * 0.5 * (x2 - 3 * x3 + 3 * x4 - x5) + s1 * 0.5 * (x3 - 2 * x4 + x5) +
         d1 * (-4 * x3 + 7 * x4 - 3 * x5) + f1 * (10 * x3 - 15 * x4 + 6 * x5);
}

// ϑ and ϑ′ on the transition [1,2] by nested Gauss-Kronrod, built once.
struct TransitionTable {
  static constexpr int N = 2000;
  double h = 1.0 / N;
  std::vector<double> v, d1;
  TransitionTable() : v(N + 1), d1(N + 1) {
    v[0] = 1.0;
    d1[0] = 2.0;
    auto th = [](double s) { return theta(s).v; };
    for (int i = 0; i < N; ++i) {
      const double a = 1.0 + i * h;
      const double base = d1[i];
      auto slope = [&](double t) {
        return base + (t > a ? gauss_kronrod<double, 31>::integrate(th, a, t, 0, 0.0) : 0.0);
      };
      d1[i + 1] = slope(a + h);
      v[i + 1] = v[i] + gauss_kronrod<double, 31>::integrate(slope, a, a + h, 0, 0.0);
    }
  }
};

const TransitionTable& table() {
  static const TransitionTable t;
  return t;
}

}  // namespace

VarthetaValue vartheta(double s) {
  s = std::abs(s);
  if (s <= 1.0) return {s * s, 2.0 * s, 2.0, 0.0, 0.0};
  const auto& t = table();
  if (s >= 2.0) return {t.v.back() + t.d1.back() * (s - 2.0), t.d1.back(), 0.0, 0.0, 0.0};
  const double x = (s - 1.0) / t.h;
  const int i = std::min(int(x), TransitionTable::N - 1);
  const double s0 = 1.0 + i * t.h, s1 = s0 + t.h;
  const Theta a = theta(s0), b = theta(s1), c = theta(s);
  const double h = t.h;
  const double v = quintic(x - i, t.v[i], h * t.d1[i], h * h * a.v, t.v[i + 1], h * t.d1[i + 1],
                           h * h * b.v);
  const double d1 = quintic(x - i, t.d1[i], h * a.v, h * h * a.d1, t.d1[i + 1], h * b.v,
                            h * h * b.d1);
  return {v, d1, c.v, c.d1, c.d2};
}

WeightProfile weight_profile(VirialKind kind, double rho, double r) {
  r = std::abs(r);
  if (kind == VirialKind::Quadratic) return {r * r, 2.0 * r, 2.0, 6.0, 0.0};
  if (!(rho > 0.0)) fail(ErrorKind::Domain, "localized virial weight needs rho > 0");
  const double y = r / rho;
  const bool cyl = kind == VirialKind::CylindricalRho;
  if (y <= 1.0) {
    // φ = r² on the plateau; for the cylinder Δ(r̄²) = 4 plus 2 from x₃²
    return {r * r, 2.0 * r, 2.0, 6.0, 0.0};
  }
  const auto t = vartheta(y);
  const double f = rho * rho * t.v, f1 = rho * t.d1, f2 = t.d2, f3 = t.d3 / rho,
               f4 = t.d4 / (rho * rho);
  if (!cyl) return {f, f1, f2, f2 + 2.0 * f1 / r, f4 + 4.0 * f3 / r};
  // two-dimensional radial Laplacian and bi-Laplacian in (x₁,x₂); x₃² adds 2 to Δφ
  return {f, f1, f2, f2 + f1 / r + 2.0, f4 + 2.0 * f3 / r - f2 / (r * r) + f1 / (r * r * r)};
}

VirialWeight build_virial_weight(VirialKind kind, double rho, const Grid& grid) {
  if (kind != VirialKind::Quadratic && !(rho > 0.0))
    fail(ErrorKind::Domain, "localized virial weight needs rho > 0");
  VirialWeight w(grid);
  w.kind = kind;
  w.rho = kind == VirialKind::Quadratic ? 0.0 : rho;
  const std::size_t N = grid_size(grid);
  w.phi.assign(N, 0.0);
  w.laplacian.assign(N, 0.0);
  w.bilaplacian.assign(N, 0.0);

  if (const auto* rg = std::get_if<RadialGrid>(&grid)) {
    if (kind == VirialKind::CylindricalRho)
      fail(ErrorKind::Dimension, "cylindrical virial weight needs a Cartesian grid");
    w.grad[0].assign(N, 0.0);
    w.hessian[0].assign(N, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
      const auto p = weight_profile(kind, rho, rg->r(j));
      w.phi[j] = p.phi;
      w.grad[0][j] = p.d1;
      w.hessian[0][j] = p.d2;
      w.laplacian[j] = p.laplacian;
      w.bilaplacian[j] = p.bilaplacian;
    }
    return w;
  }

  const CartesianGrid& g = std::get<CartesianGrid>(grid);
  for (auto& c : w.grad) c.assign(N, 0.0);
  for (auto& c : w.hessian) c.assign(N, 0.0);
  const bool cyl = kind == VirialKind::CylindricalRho;
  for (std::size_t i = 0; i < N; ++i) {
    const Vec3 x = g.position(i);
    const double r = cyl ? std::hypot(x[0], x[1]) : std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const auto p = weight_profile(kind, rho, r);
    const int dims = cyl ? 2 : 3;
    // ∂_jφ = φ′ x̂_j, ∂²_{jk}φ = φ″ x̂_j x̂_k + (φ′/r)(δ_jk − x̂_j x̂_k); at r = 0 only φ″δ_jk
    double e[3] = {0, 0, 0};
    if (r > 0)
      for (int a = 0; a < dims; ++a) e[a] = x[a] / r;
    const double over_r = r > 0 ? p.d1 / r : p.d2;
    int slot = 0;
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b, ++slot) {
        double h;
        if (a >= dims || b >= dims) {
          h = (a == b) ? 2.0 : 0.0;  // x₃² direction of the cylinder
        } else {
          const double ee = r > 0 ? e[a] * e[b] : 0.0;
          h = p.d2 * ee + over_r * ((a == b ? 1.0 : 0.0) - ee);
        }
        w.hessian[slot][i] = h;
      }
    }
    for (int a = 0; a < dims; ++a) w.grad[a][i] = p.d1 * e[a];
    w.phi[i] = p.phi;
    if (cyl) {
      w.phi[i] += x[2] * x[2];
      w.grad[2][i] = 2.0 * x[2];
    }
    w.laplacian[i] = p.laplacian;
    w.bilaplacian[i] = p.bilaplacian;
  }
  return w;
}

}  // namespace nls
