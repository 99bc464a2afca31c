#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "movpatch/geometry.hpp"

namespace movpatch {

struct MotionParams {
  double tau = 10.0;   // mesh relaxation time
  double beta = 1.0;   // meso tracking time
  int smoothing_stride = 0;  // 0 = use the heterogeneity period
  bool enabled = true;

  void validate() const {
    if (!(tau > 0.0) || !(beta > 0.0))
      throw std::invalid_argument("motion: tau and beta must be > 0");
  }
};

// Second-derivative stencil on a non-uniform grid; exact for quadratics.
inline double second_diff(double U_m, double U_0, double U_p, double H_m, double H_p) {
  if (!(H_m > 0.0) || !(H_p > 0.0))
    throw std::invalid_argument("second_diff: spacings must be > 0");
  return 2.0 / (H_p + H_m) * ((U_p - U_0) / H_p - (U_0 - U_m) / H_m);
}

// Regularisation parameter: trapezoid sum of |U''|^{2/3} over the node
// intervals, normalised by the region length, cubed, floored at 1.
inline double mesh_alpha(const std::vector<double>& Upp, const std::vector<double>& H,
                         double length) {
  if (Upp.size() < 2 || H.size() + 1 != Upp.size())
    throw std::invalid_argument("mesh_alpha: need U'' per node and one spacing per interval");
  double s = 0.0;
  for (std::size_t j = 0; j < H.size(); ++j) {
    s += H[j] * 0.5 *
         (std::pow(std::abs(Upp[j + 1]), 2.0 / 3.0) + std::pow(std::abs(Upp[j]), 2.0 / 3.0));
  }
  s /= length;
  return std::max(1.0, s * s * s);
}

// Curvature-based mesh density.
inline double mesh_density(double Upp, double alpha) {
  return std::cbrt(1.0 + Upp * Upp / alpha);
}

// Moving-mesh node velocities for one region whose first and last nodes are
// held fixed (domain boundaries or meso nodes). X and U are the region's
// macro nodes; returns one velocity per node, zero at the ends.
inline std::vector<double> ordinary_velocities(const std::vector<double>& X,
                                               const std::vector<double>& U, double tau) {
  const std::size_t M = X.size();
  if (U.size() != M) throw std::invalid_argument("ordinary_velocities: size mismatch");
  std::vector<double> v(M, 0.0);
  if (M < 3) return v;
  std::vector<double> H(M - 1);
  for (std::size_t j = 0; j + 1 < M; ++j) {
    H[j] = X[j + 1] - X[j];
    if (!(H[j] > 0.0))
      throw std::invalid_argument("ordinary_velocities: nodes not strictly increasing");
  }
  std::vector<double> Upp(M, 0.0);
  for (std::size_t j = 1; j + 1 < M; ++j)
    Upp[j] = second_diff(U[j - 1], U[j], U[j + 1], H[j - 1], H[j]);
  Upp[0] = Upp[1];
  Upp[M - 1] = Upp[M - 2];

  const double alpha = mesh_alpha(Upp, H, X[M - 1] - X[0]);
  std::vector<double> rho(M);
  for (std::size_t j = 0; j < M; ++j) rho[j] = mesh_density(Upp[j], alpha);

  const double Nf = static_cast<double>(M - 1);
  for (std::size_t j = 1; j + 1 < M; ++j) {
    v[j] = Nf * Nf / (2.0 * rho[j] * tau) *
           ((rho[j + 1] + rho[j]) * H[j] - (rho[j] + rho[j - 1]) * H[j - 1]);
  }
  return v;
}

// Gradient-weighted location of the steep structure inside a meso-patch,
// using stride-kappa difference estimators to smooth the heterogeneous
// micro-scale oscillation. Falls back to the patch centre when featureless.
inline double meso_target(const Patch& p, int stride) {
  if (stride < 1 || 2 * p.n < stride)
    throw std::invalid_argument("meso_target: need at least stride+1 points");
  const std::size_t len = p.points();
  const std::size_t k = static_cast<std::size_t>(stride);
  const double dx = static_cast<double>(stride) * p.d;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i + k < len; ++i) {
    const double g = (p.u[i + k] - p.u[i]) / dx;
    const double w = g * g;
    const double mid = p.x0 + p.d * (static_cast<double>(i + i + k) / 2.0 -
                                     static_cast<double>(p.n));
    num += mid * w;
    den += w;
  }
  if (den == 0.0) return p.x0;
  return num / den;
}

// Relaxation of the meso-patch centre toward the tracked structure.
inline double meso_velocity(double x_hat, double x_center, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("meso_velocity: beta must be > 0");
  return (x_hat - x_center) / beta;
}

// Chain-rule term for fields on a grid moving at speed V: adds V * u_x
// (centred stride-1 differences) to the interior derivatives.
inline void advect_correction_into(const double* u, std::size_t len, double velocity,
                                   double d, double* du) {
  if (velocity == 0.0) return;
  const double c = velocity / (2.0 * d);
  for (std::size_t i = 1; i + 1 < len; ++i) du[i] += c * (u[i + 1] - u[i - 1]);
}

inline std::vector<double> advect_correction(const std::vector<double>& u, double velocity,
                                             double d) {
  std::vector<double> out(u.size(), 0.0);
  advect_correction_into(u.data(), u.size(), velocity, d, out.data());
  return std::vector<double>(out.begin() + 1, out.end() - 1);
}

}  // namespace movpatch
