#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "movpatch/heterogeneity.hpp"
#include "movpatch/rk45.hpp"

namespace movpatch {

// One contiguous micro-grid segment with uniform spacing d.
struct MicroSegment {
  std::vector<double> x;
  std::vector<double> u;
  double d = 0.0;
};

// Heterogeneous lattice right-hand side at one point,
//   du_k/dt = (1/d^2)[eps_k (u_{k+1}-u_k) - eps_{k-1} (u_k-u_{k-1})]
//           - (1/2d)[gam_{k+1} u_{k+1}^2 - gam_{k-1} u_{k-1}^2].
inline double micro_rhs(double u_km1, double u_k, double u_kp1, double eps_km1,
                        double eps_k, double gam_km1, double gam_kp1, double d) {
  if (!(d > 0.0)) throw std::invalid_argument("micro_rhs: d must be > 0");
  return (eps_k * (u_kp1 - u_k) - eps_km1 * (u_k - u_km1)) / (d * d) -
         (gam_kp1 * u_kp1 * u_kp1 - gam_km1 * u_km1 * u_km1) / (2.0 * d);
}

// Numerical flux between points k and k+1. The point update
// (F_k - F_{k-1})/d is algebraically identical to micro_rhs, so the
// scheme telescopes: the lattice is in conservation form.
inline double lattice_flux(double u_k, double u_kp1, double eps_k, double gam_k,
                           double gam_kp1, double d) {
  return eps_k * (u_kp1 - u_k) / d -
         0.5 * (gam_kp1 * u_kp1 * u_kp1 + gam_k * u_k * u_k);
}

// Flux-form evaluation over raw arrays; coefficient arrays are per point.
// du[0] and du[len-1] are left untouched (edge values are algebraic).
inline void segment_rhs_into(const double* u, const double* eps_at, const double* gam_at,
                             std::size_t len, double d, double* du) {
  double f_prev = lattice_flux(u[0], u[1], eps_at[0], gam_at[0], gam_at[1], d);
  for (std::size_t k = 1; k + 1 < len; ++k) {
    const double f = lattice_flux(u[k], u[k + 1], eps_at[k], gam_at[k], gam_at[k + 1], d);
    du[k] = (f - f_prev) / d;
    f_prev = f;
  }
}

// Expand the kappa-periodic coefficients to one value per micro point.
inline void expand_coefficients(const HeterogeneityProfile& p, int phase_of_first_point,
                                std::size_t len, std::vector<double>& eps_at,
                                std::vector<double>& gam_at) {
  eps_at.resize(len);
  gam_at.resize(len);
  int ph = ((phase_of_first_point % p.kappa) + p.kappa) % p.kappa;
  for (std::size_t k = 0; k < len; ++k) {
    eps_at[k] = p.eps[ph];
    gam_at[k] = p.gam[ph];
    if (++ph == p.kappa) ph = 0;
  }
}

// Derivatives at the interior points (indices 1..len-2) of a segment.
inline std::vector<double> segment_rhs(const MicroSegment& seg,
                                       const HeterogeneityProfile& profile,
                                       int phase_of_first_point) {
  const std::size_t len = seg.u.size();
  if (len < 3) throw std::invalid_argument("segment_rhs: need at least 3 points");
  std::vector<double> eps_at, gam_at;
  expand_coefficients(profile, phase_of_first_point, len, eps_at, gam_at);
  std::vector<double> du(len, 0.0);
  segment_rhs_into(seg.u.data(), eps_at.data(), gam_at.data(), len, seg.d, du.data());
  return std::vector<double>(du.begin() + 1, du.end() - 1);
}

// Dirichlet data at the two domain ends, as functions of time.
struct BoundaryCondition {
  std::function<double(double)> left;
  std::function<double(double)> right;
};

struct FullDomainState {
  MicroSegment segment;
  HeterogeneityProfile profile;
  BoundaryCondition bc;
  double t = 0.0;
};

inline FullDomainState make_full_domain(double a, double b, std::size_t points,
                                        const HeterogeneityProfile& profile,
                                        const BoundaryCondition& bc,
                                        const std::function<double(double)>& ic,
                                        double t0 = 0.0) {
  if (points < 3) throw std::invalid_argument("make_full_domain: need >= 3 points");
  FullDomainState s;
  s.profile = profile;
  s.bc = bc;
  s.t = t0;
  s.segment.d = (b - a) / static_cast<double>(points - 1);
  s.segment.x.resize(points);
  s.segment.u.resize(points);
  for (std::size_t k = 0; k < points; ++k) {
    s.segment.x[k] = a + s.segment.d * static_cast<double>(k);
    s.segment.u[k] = ic(s.segment.x[k]);
  }
  s.segment.u.front() = bc.left(t0);
  s.segment.u.back() = bc.right(t0);
  return s;
}

// Explicit-diffusion step cap, 0.2 d^2 / eps_max.
inline double diffusion_dt_cap(const HeterogeneityProfile& p, double d) {
  double eps_max = 0.0;
  for (double e : p.eps) eps_max = std::max(eps_max, e);
  return 0.2 * d * d / eps_max;
}

struct FullFrame {
  double t;
  std::vector<double> u;
};

// Integrate the full-domain lattice to t_end with the shared adaptive
// integrator; boundary values are pinned to bc(t). Snapshot times are hit
// exactly by step truncation.
inline void run_full_domain(FullDomainState& state, double t_end,
                            const std::vector<double>& snapshot_times,
                            const IntegratorConfig& cfg,
                            const std::function<void(double, const MicroSegment&)>& emit) {
  if (t_end < state.t) throw std::invalid_argument("run_full_domain: t_end < t");
  cfg.validate();
  const std::size_t len = state.segment.u.size();
  const double d = state.segment.d;
  std::vector<double> eps_at, gam_at;
  expand_coefficients(state.profile, 0, len, eps_at, gam_at);

  std::vector<double> scratch(len);
  auto rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    scratch = y;
    scratch.front() = state.bc.left(t);
    scratch.back() = state.bc.right(t);
    dy.assign(len, 0.0);
    segment_rhs_into(scratch.data(), eps_at.data(), gam_at.data(), len, d, dy.data());
  };

  double dt_cap = diffusion_dt_cap(state.profile, d);
  if (cfg.dt_max > 0.0) dt_cap = std::min(dt_cap, cfg.dt_max);
  double dt = cfg.dt_init > 0.0 ? std::min(cfg.dt_init, dt_cap) : dt_cap;

  Rk45 stepper(len);
  std::vector<double> y = state.segment.u;
  std::vector<double> ynew(len);
  std::size_t next_snap = 0;
  const double snap_tol = 1e-12 * std::max(1.0, std::abs(t_end));
  while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= state.t + snap_tol) {
    state.segment.u = y;
    emit(snapshot_times[next_snap], state.segment);
    ++next_snap;
  }

  long steps = 0;
  while (state.t < t_end - snap_tol) {
    double dt_try = std::min(dt, dt_cap);
    dt_try = std::min(dt_try, t_end - state.t);
    if (next_snap < snapshot_times.size())
      dt_try = std::min(dt_try, snapshot_times[next_snap] - state.t);
    if (dt_try < cfg.dt_min)
      throw std::runtime_error("run_full_domain: step underflow at t=" + std::to_string(state.t));

    const double err = stepper.step(rhs, state.t, y, dt_try, ynew, cfg);
    if (err <= 1.0) {
      stepper.accept();
      state.t += dt_try;
      y.swap(ynew);
      const double bl = state.bc.left(state.t);
      const double br = state.bc.right(state.t);
      if (bl != y.front() || br != y.back()) {
        y.front() = bl;
        y.back() = br;
        stepper.reset();  // boundary pinning perturbed the FSAL state
      }
      dt = std::min(stepper.next_dt(dt_try, err, true), dt_cap);
      while (next_snap < snapshot_times.size() &&
             snapshot_times[next_snap] <= state.t + snap_tol) {
        state.segment.u = y;
        emit(snapshot_times[next_snap], state.segment);
        ++next_snap;
      }
    } else {
      dt = stepper.next_dt(dt_try, err, false);
    }
    if (++steps > cfg.max_steps)
      throw std::runtime_error("run_full_domain: max_steps exceeded");
  }
  state.segment.u = y;
}

}  // namespace movpatch
