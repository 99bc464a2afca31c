#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace movpatch {

// Two-shock solution of the homogeneous Burgers equation: a ratio of three
// exponentials whose plateaus are u = 1, 0.5 and 0.1. Evaluated in shifted
// form (largest exponent subtracted) so it never overflows.
inline double exact_burgers_three_wave(double x, double t, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("exact_burgers_three_wave: eps must be > 0");
  const double e1 = (0.5 - x - 4.95 * t) / (20.0 * eps);
  const double e2 = (0.5 - x - 0.75 * t) / (4.0 * eps);
  const double e3 = (0.375 - x) / (2.0 * eps);
  const double m = std::max({e1, e2, e3});
  const double w1 = std::exp(e1 - m);
  const double w2 = std::exp(e2 - m);
  const double w3 = std::exp(e3 - m);
  return (0.1 * w1 + 0.5 * w2 + w3) / (w1 + w2 + w3);
}

}  // namespace movpatch
