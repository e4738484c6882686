#include "nls/core/field.hpp"

#include <cmath>
#include <random>
#include <string>

#include "nls/core/error.hpp"

namespace nls {

FieldState::FieldState(const CartesianGrid& g, double t) : grid(g), values(g.size()), time(t) {}
FieldState::FieldState(const RadialGrid& g, double t) : grid(g), values(g.size()), time(t) {}
FieldState::FieldState(Grid g, CField v, double t) : grid(std::move(g)), values(std::move(v)), time(t) {
  if (values.size() != grid_size(grid))
    fail(ErrorKind::Dimension, "field has " + std::to_string(values.size()) + " samples, grid has " +
                                   std::to_string(grid_size(grid)));
}

const CartesianGrid& FieldState::cartesian() const {
  if (!is_cartesian()) fail(ErrorKind::Dimension, "operation needs a Cartesian state");
  return std::get<CartesianGrid>(grid);
}

const RadialGrid& FieldState::radial() const {
  if (!is_radial()) fail(ErrorKind::Dimension, "operation needs a radial state");
  return std::get<RadialGrid>(grid);
}

void FieldState::check_finite() const {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
      fail(ErrorKind::Domain, "non-finite amplitude at index " + std::to_string(i));
  }
}

FieldState FieldState::sample(const CartesianGrid& g, const std::function<cplx(const Vec3&)>& f,
                              double t) {
  FieldState s(g, t);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = f(g.position(i));
  return s;
}

FieldState FieldState::sample(const RadialGrid& g, const std::function<cplx(double)>& f, double t) {
  FieldState s(g, t);
  for (std::size_t j = 0; j < s.values.size(); ++j) s.values[j] = f(g.r(j));
  return s;
}

bool same_grid(const Grid& a, const Grid& b) {
  if (a.index() != b.index()) return false;
  if (auto* ca = std::get_if<CartesianGrid>(&a)) return *ca == std::get<CartesianGrid>(b);
  return std::get<RadialGrid>(a) == std::get<RadialGrid>(b);
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!same_grid(a, b)) fail(ErrorKind::Dimension, std::string(what) + ": grids differ");
}

double max_abs(const CField& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

FieldState random_smooth_state(const CartesianGrid& g, std::uint64_t seed, int bumps) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double L = g.box_length();
  struct Bump {
    Vec3 c, v;
    double amp, width, phase;
  };
  std::vector<Bump> bs(bumps);
  for (auto& b : bs) {
    b.width = L * (0.03 + 0.02 * u01(rng));
    for (int a = 0; a < 3; ++a) {
      b.c[a] = L * 0.08 * (2 * u01(rng) - 1);
      b.v[a] = 0.5 * (2 * u01(rng) - 1) / b.width;
    }
    b.amp = 0.2 + 2.0 * u01(rng);
    b.phase = 6.283185307179586 * u01(rng);
  }
  return FieldState::sample(g, [&](const Vec3& x) {
    cplx acc{};
    for (const auto& b : bs) {
      double r2 = 0, ph = b.phase;
      for (int a = 0; a < 3; ++a) {
        r2 += (x[a] - b.c[a]) * (x[a] - b.c[a]);
        ph += b.v[a] * x[a];
      }
      acc += b.amp * std::exp(-r2 / (b.width * b.width)) * std::exp(cplx(0, ph));
    }
    return acc;
  });
}

}  // namespace nls
