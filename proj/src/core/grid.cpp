#include "nls/core/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nls/core/error.hpp"

namespace nls {

CartesianGrid::CartesianGrid(int n, double box_length) : n_(n), L_(box_length) {
  if (n < 2 || (n & (n - 1)) != 0)
    fail(ErrorKind::Domain, "grid size must be a power of two, got " + std::to_string(n));
  if (!(box_length > 0) || !std::isfinite(box_length))
    fail(ErrorKind::Domain, "box length must be positive");
  h_ = L_ / n_;
  k_.resize(n_);
  const double dk = 2.0 * std::numbers::pi / L_;
  for (int i = 0; i < n_; ++i) k_[i] = dk * (i < n_ / 2 ? i : i - n_);
}

Vec3 CartesianGrid::position(std::size_t idx) const {
  auto [ix, iy, iz] = unravel(idx);
  return {coord(ix), coord(iy), coord(iz)};
}

std::array<int, 3> CartesianGrid::unravel(std::size_t idx) const {
  const std::size_t n = std::size_t(n_);
  return {int(idx % n), int((idx / n) % n), int(idx / (n * n))};
}

RadialGrid::RadialGrid(double r_max, int m) : r_max_(r_max), m_(m) {
  if (m < 8) fail(ErrorKind::Domain, "radial grid needs at least 8 nodes");
  if (!(r_max > 0) || !std::isfinite(r_max)) fail(ErrorKind::Domain, "r_max must be positive");
  dr_ = r_max_ / m_;
}

std::size_t grid_size(const Grid& g) {
  return std::visit([](const auto& x) { return x.size(); }, g);
}

}  // namespace nls
