#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

namespace nls {

using Vec3 = std::array<double, 3>;

class CartesianGrid {
 public:
  CartesianGrid(int n, double box_length);

  int n() const { return n_; }
  double box_length() const { return L_; }
  double spacing() const { return h_; }
  double cell_volume() const { return h_ * h_ * h_; }
  std::size_t size() const { return std::size_t(n_) * n_ * n_; }

  // x_i = -L/2 + i h, so the origin sits at index n/2
  double coord(int i) const { return -0.5 * L_ + i * h_; }
  // Symmetric table 2πk/L, k in [-n/2, n/2); Nyquist stays at -n/2.
  double wavenumber(int i) const { return k_[i]; }
  // Same table with the Nyquist mode zeroed; used for odd-order derivatives.
  double derivative_wavenumber(int i) const { return i == n_ / 2 ? 0.0 : k_[i]; }
  const std::vector<double>& wavenumbers() const { return k_; }

  std::size_t index(int ix, int iy, int iz) const {
    return std::size_t(ix) + std::size_t(n_) * (std::size_t(iy) + std::size_t(n_) * iz);
  }
  Vec3 position(std::size_t idx) const;
  std::array<int, 3> unravel(std::size_t idx) const;

  bool operator==(const CartesianGrid& o) const { return n_ == o.n_ && L_ == o.L_; }

 private:
  int n_;
  double L_;
  double h_;
  std::vector<double> k_;
};

// Nodes r_j = j·dr for j = 1..m; element 0 of a field stores r_1.
class RadialGrid {
 public:
  RadialGrid(double r_max, int m);

  double r_max() const { return r_max_; }
  int m() const { return m_; }
  std::size_t size() const { return std::size_t(m_); }
  double spacing() const { return dr_; }
  double r(std::size_t j) const { return double(j + 1) * dr_; }

  bool operator==(const RadialGrid& o) const { return m_ == o.m_ && r_max_ == o.r_max_; }

 private:
  double r_max_;
  int m_;
  double dr_;
};

using Grid = std::variant<CartesianGrid, RadialGrid>;

std::size_t grid_size(const Grid& g);

}  // namespace nls
