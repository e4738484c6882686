#pragma once

#include <memory>

#include "nls/core/field.hpp"
#include "nls/core/params.hpp"
#include "nls/weights/cutoff.hpp"

namespace nls {

// ξ rounded to the lattice (2π/L)ℤ³ so that e^{ix·ξ} is periodic on the box.
struct SnappedXi {
  Vec3 xi;
  double distance;  // |ξ_requested − ξ|, at most (√3/2)(2π/L)
};
SnappedXi snap_to_lattice(const CartesianGrid& g, const Vec3& xi);

struct BoostedState {
  FieldState state;
  Vec3 xi;
  double snap_distance;
};
// u ↦ e^{ix·ξ}u with ξ snapped first. Radial states are rejected (a boost breaks symmetry).
BoostedState galilean_boost(const FieldState& s, const Vec3& xi);

// Integrals of a state against the translated cutoff χ_R(· − z):
//   mass = ∫χ²|u|², current = ∫χ² Im(ū∇u), kinetic = ∫|∇(χu)|² = ∫χ²|∇u|² − ∫χΔχ|u|²,
//   lq = ∫|χu|^{q+1}, lp = ∫|χu|^{p+1}.
struct LocalIntegrals {
  double mass = 0;
  Vec3 current{0, 0, 0};
  double kinetic = 0;
  double lq = 0, lp = 0;

  // ‖∇(χ e^{ix·ξ}u)‖² = kinetic + 2ξ·current + |ξ|²·mass
  double boosted_kinetic(const Vec3& xi) const;
};

// Precomputes ∇u once per state so that many (z, R) evaluations are cheap.
// Cartesian states: pointwise sums over the grid points of the ball |x − z| < R (minimum
// image, so R < L/2). Radial states: exact reduction of the ball integrals to one
// dimension, (2π/|z|)∫₀^R t f(t) ∫_{||z|−t|}^{|z|+t} s g(s) ds dt, with cumulative
// fourth-order tables in s.
class Localizer {
 public:
  Localizer(const FieldState& s, double p, double q);
  ~Localizer();
  Localizer(Localizer&&) noexcept;

  LocalIntegrals at(const CutoffFamily& family, const Vec3& z) const;
  double total_mass() const { return total_mass_; }
  bool radial() const { return radial_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double total_mass_ = 0;
  bool radial_ = false;
};

// ξ(z, R) = −∫χ²_R(x−z) Im(ū∇u) / ∫χ²_R(x−z)|u|², and 0 when the denominator is below
// 1e-14·M(u).
Vec3 optimal_xi(const LocalIntegrals& loc, double total_mass);
Vec3 optimal_xi(const FieldState& s, const CutoffFamily& family, const Vec3& z);

struct LocalizedPohozaev {
  double g_loc = 0;
  double grad_sq_loc = 0;
  double ratio = 0;  // +∞ when grad_sq_loc < 1e-20
  bool sentinel() const;
};
LocalizedPohozaev localized_pohozaev(const LocalIntegrals& loc, const Vec3& xi, const PhysParams& params);
// Forms w = χ_R(·−z)·galilean_boost(u, ξ) on the grid and evaluates G(w), ‖∇w‖² spectrally.
LocalizedPohozaev localized_pohozaev(const FieldState& s, const CutoffFamily& family, const Vec3& z,
                                     const Vec3& xi, const PhysParams& params);

}  // namespace nls
