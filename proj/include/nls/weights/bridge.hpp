#pragma once

#include <cmath>

namespace nls::weights {

// Smooth step s(t) = B(t)/(B(t)+B(1-t)), B(t) = exp(-1/t): 0 for t <= 0, 1 for t >= 1,
// C^∞ in between with every derivative vanishing at both ends.
struct BridgeValue {
  double s, ds, d2s;
};

inline BridgeValue bridge(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  // s = 1/(1+e^g), g = 1/t - 1/(1-t)
  const double u = 1.0 - t;
  const double g = 1.0 / t - 1.0 / u;
  const double s = g > 0 ? std::exp(-g) / (1.0 + std::exp(-g)) : 1.0 / (1.0 + std::exp(g));
  const double s1 = s * (1.0 - s);
  const double dg = -1.0 / (t * t) - 1.0 / (u * u);
  const double d2g = 2.0 / (t * t * t) - 2.0 / (u * u * u);
  const double ds = -dg * s1;
  const double d2s = -d2g * s1 - dg * ds * (1.0 - 2.0 * s);
  return {s, ds, d2s};
}

}  // namespace nls::weights
