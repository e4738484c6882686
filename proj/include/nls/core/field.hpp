#pragma once

#include <cstdint>
#include <functional>

#include "nls/core/aligned.hpp"
#include "nls/core/grid.hpp"

namespace nls {

struct FieldState {
  Grid grid;
  CField values;
  double time = 0.0;

  explicit FieldState(const CartesianGrid& g, double t = 0.0);
  explicit FieldState(const RadialGrid& g, double t = 0.0);
  FieldState(Grid g, CField v, double t);

  bool is_cartesian() const { return std::holds_alternative<CartesianGrid>(grid); }
  bool is_radial() const { return std::holds_alternative<RadialGrid>(grid); }
  const CartesianGrid& cartesian() const;
  const RadialGrid& radial() const;
  std::size_t size() const { return values.size(); }

  // Throws a Domain error naming the first non-finite index.
  void check_finite() const;

  static FieldState sample(const CartesianGrid& g, const std::function<cplx(const Vec3&)>& f,
                           double t = 0.0);
  static FieldState sample(const RadialGrid& g, const std::function<cplx(double)>& f,
                           double t = 0.0);
};

bool same_grid(const Grid& a, const Grid& b);
void require_same_grid(const Grid& a, const Grid& b, const char* what);

double max_abs(const CField& v);

// Sum of a few randomly placed, randomly phased Gaussian bumps kept well inside the
// box; deterministic in the seed. Used by randomized property checks.
FieldState random_smooth_state(const CartesianGrid& g, std::uint64_t seed, int bumps = 3);

}  // namespace nls
