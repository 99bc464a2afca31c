#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

#include "movpatch/coupling.hpp"
#include "movpatch/geometry.hpp"
#include "movpatch/heterogeneity.hpp"
#include "movpatch/lattice.hpp"
#include "movpatch/merging.hpp"
#include "movpatch/motion.hpp"
#include "movpatch/rk45.hpp"

namespace movpatch {

// Flat ODE state for a patch system: [all patch u values | one x0 per patch].
// Patch edge values carry no derivative; they are recomputed algebraically
// inside every right-hand-side evaluation.
class SystemRhs {
 public:
  SystemRhs(const PatchSystem& sys, const MotionParams& params)
      : work_(sys), params_(params) {
    params_.validate();
    const std::size_t P = work_.patches.size();
    offsets_.resize(P);
    eps_at_.resize(P);
    gam_at_.resize(P);
    const int kappa = work_.profile.kappa;
    std::size_t off = 0;
    for (std::size_t j = 0; j < P; ++j) {
      const Patch& p = work_.patches[j];
      if (p.n % kappa != 0)
        throw std::invalid_argument("patch half-count not a multiple of kappa");
      offsets_[j] = off;
      off += p.points();
      // the coefficient cycle is pinned to the patch's lattice indices at
      // construction and carried with the patch as it moves; centre snapping
      // in the builder makes this agree with the global lattice phase at t=0
      const double pos = (p.x0 - work_.a) / p.d - static_cast<double>(p.n);
      const long m = std::lround(pos);
      const int q = static_cast<int>((m % kappa + kappa) % kappa);
      expand_coefficients(work_.profile, q, p.points(), eps_at_[j], gam_at_[j]);
    }
    u_total_ = off;
    velocities_.resize(P);
  }

  std::size_t dim() const { return u_total_ + work_.patches.size(); }
  std::size_t u_offset(std::size_t j) const { return offsets_[j]; }
  std::size_t x0_offset(std::size_t j) const { return u_total_ + j; }
  const PatchSystem& system() const { return work_; }

  void to_state(const PatchSystem& sys, std::vector<double>& y) const {
    y.resize(dim());
    for (std::size_t j = 0; j < sys.patches.size(); ++j) {
      const Patch& p = sys.patches[j];
      std::copy(p.u.begin(), p.u.end(), y.begin() + static_cast<long>(offsets_[j]));
      y[x0_offset(j)] = p.x0;
    }
  }

  void from_state(const std::vector<double>& y, PatchSystem& sys) const {
    for (std::size_t j = 0; j < sys.patches.size(); ++j) {
      Patch& p = sys.patches[j];
      std::copy(y.begin() + static_cast<long>(offsets_[j]),
                y.begin() + static_cast<long>(offsets_[j] + p.points()), p.u.begin());
      p.x0 = y[x0_offset(j)];
    }
  }

  // Minimum adjacent gap read directly from a state vector.
  double state_min_gap(const std::vector<double>& y) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < work_.patches.size(); ++j) {
      const double re = y[x0_offset(j)] + work_.patches[j].d * work_.patches[j].n;
      const double le = y[x0_offset(j + 1)] - work_.patches[j + 1].d * work_.patches[j + 1].n;
      best = std::min(best, le - re);
    }
    return best;
  }

  // Patch velocities from a synced working system: moving-mesh velocities
  // for movable ordinary patches, selfish tracking for meso-patches.
  void compute_velocities(const MacroView& view) {
    const std::size_t P = work_.patches.size();
    std::fill(velocities_.begin(), velocities_.end(), 0.0);
    if (!params_.enabled) return;

    const int stride = params_.smoothing_stride > 0 ? params_.smoothing_stride
                                                    : work_.profile.kappa;
    for (std::size_t j = 0; j < P; ++j) {
      const Patch& p = work_.patches[j];
      if (p.kind != PatchKind::meso || p.boundary_fixed) continue;
      velocities_[j] = meso_velocity(meso_target(p, stride), p.x0, params_.beta);
    }

    // Regions run wall-to-wall; meso nodes and fixed patches are walls.
    auto is_wall = [&](std::size_t k) {
      return view[k].side != NodeSide::center ||
             work_.patches[view[k].patch].boundary_fixed;
    };
    std::size_t r0 = 0;
    for (std::size_t k = 1; k < view.size(); ++k) {
      if (!is_wall(k) && k + 1 < view.size()) continue;
      // region nodes r0..k
      if (k - r0 >= 2) {
        region_X_.clear();
        region_U_.clear();
        for (std::size_t q = r0; q <= k; ++q) {
          region_X_.push_back(view[q].X);
          region_U_.push_back(view[q].U);
        }
        const std::vector<double> v = ordinary_velocities(region_X_, region_U_, params_.tau);
        for (std::size_t q = r0 + 1; q < k; ++q) {
          if (view[q].side == NodeSide::center &&
              !work_.patches[view[q].patch].boundary_fixed)
            velocities_[view[q].patch] = v[q - r0];
        }
      }
      if (is_wall(k)) r0 = k;
    }
  }

  const std::vector<double>& velocities() const { return velocities_; }

  void operator()(double t, const std::vector<double>& y, std::vector<double>& dy) {
    from_state(y, work_);
    const MacroView view = macro_view(work_);
    const EdgeValues ev = compute_edge_values(work_, view, t);
    const std::size_t P = work_.patches.size();
    for (std::size_t j = 0; j < P; ++j) {
      Patch& p = work_.patches[j];
      p.u.front() = ev.left[j];
      p.u.back() = ev.right[j];
    }
    compute_velocities(view);

    dy.assign(dim(), 0.0);
    for (std::size_t j = 0; j < P; ++j) {
      const Patch& p = work_.patches[j];
      double* du = dy.data() + offsets_[j];
      segment_rhs_into(p.u.data(), eps_at_[j].data(), gam_at_[j].data(), p.points(), p.d, du);
      advect_correction_into(p.u.data(), p.points(), velocities_[j], p.d, du);
      dy[x0_offset(j)] = velocities_[j];
    }
  }

  // Write current edge values into a system (used before emitting snapshots).
  void refresh_edges(PatchSystem& sys, double t) const {
    const EdgeValues ev = compute_edge_values(sys, macro_view(sys), t);
    for (std::size_t j = 0; j < sys.patches.size(); ++j) {
      sys.patches[j].u.front() = ev.left[j];
      sys.patches[j].u.back() = ev.right[j];
    }
  }

 private:
  PatchSystem work_;
  MotionParams params_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<double>> eps_at_, gam_at_;  // per-patch coefficient arrays
  std::vector<double> velocities_;
  std::vector<double> region_X_, region_U_;
  std::size_t u_total_ = 0;
};

struct IntegrateResult {
  std::vector<MergeEvent> merges;
  long steps = 0;
};

// Integrate the patch system to t_end. Collisions interrupt the step: the
// crossing is bisected to |gap| <= 1e-10 d, edges are snapped to exact
// coincidence, the pair merges into a meso-patch, and integration resumes
// on the reindexed system. Snapshot times are hit exactly.
inline IntegrateResult integrate_patches(
    PatchSystem& sys, double t_end, const std::vector<double>& snapshot_times,
    const IntegratorConfig& cfg, const MotionParams& params,
    const std::function<void(double, const PatchSystem&)>& emit = {}) {
  if (t_end < sys.t) throw std::invalid_argument("integrate_patches: t_end < t");
  cfg.validate();
  IntegrateResult result;

  const double d = sys.patches.front().d;
  const double snap_tol = 1e-10 * d;
  const double time_tol = 1e-12 * std::max(1.0, std::abs(t_end));

  auto rhs = std::make_unique<SystemRhs>(sys, params);
  // Merge any pairs already touching (including events found mid-run).
  auto settle_merges = [&]() {
    bool merged = false;
    while (sys.patches.size() >= 2) {
      const GapInfo g = min_gap(sys);
      if (g.gap > snap_tol) break;
      if (g.gap < -snap_tol)
        throw std::runtime_error("integrate_patches: patches overlap beyond snap tolerance");
      result.merges.push_back(merge_at(sys, g.s, sys.t));
      merged = true;
    }
    if (merged) rhs = std::make_unique<SystemRhs>(sys, params);
    return merged;
  };
  settle_merges();

  double dt_cap = diffusion_dt_cap(sys.profile, d);
  if (cfg.dt_max > 0.0) dt_cap = std::min(dt_cap, cfg.dt_max);
  double dt = cfg.dt_init > 0.0 ? std::min(cfg.dt_init, dt_cap) : dt_cap;

  std::vector<double> y, ynew, yprobe;
  rhs->to_state(sys, y);
  Rk45 stepper(y.size());

  std::size_t next_snap = 0;
  auto emit_due = [&]() {
    while (next_snap < snapshot_times.size() &&
           snapshot_times[next_snap] <= sys.t + time_tol) {
      rhs->from_state(y, sys);
      rhs->refresh_edges(sys, sys.t);
      if (emit) emit(snapshot_times[next_snap], sys);
      ++next_snap;
    }
  };
  emit_due();

  auto deref = [&](double t, const std::vector<double>& yy, std::vector<double>& dyy) {
    (*rhs)(t, yy, dyy);
  };

  while (sys.t < t_end - time_tol) {
    double dt_try = std::min(dt, dt_cap);
    dt_try = std::min(dt_try, t_end - sys.t);
    if (next_snap < snapshot_times.size())
      dt_try = std::min(dt_try, snapshot_times[next_snap] - sys.t);
    if (!(dt_try > 0.0) || dt_try < cfg.dt_min)
      throw std::runtime_error("integrate_patches: step underflow at t=" +
                               std::to_string(sys.t));

    const double err = stepper.step(deref, sys.t, y, dt_try, ynew, cfg);
    if (++result.steps > cfg.max_steps)
      throw std::runtime_error("integrate_patches: max_steps exceeded");
    if (err > 1.0) {
      dt = stepper.next_dt(dt_try, err, false);
      continue;
    }

    const double gap_full = rhs->state_min_gap(ynew);
    if (gap_full > snap_tol) {
      stepper.accept();
      sys.t += dt_try;
      y.swap(ynew);
      const double bl = sys.bc.left(sys.t);
      const double br = sys.bc.right(sys.t);
      const std::size_t il = rhs->u_offset(0);
      const std::size_t ir = rhs->u_offset(sys.patches.size() - 1) +
                             sys.patches.back().points() - 1;
      if (y[il] != bl || y[ir] != br) {
        y[il] = bl;
        y[ir] = br;
        stepper.reset();
      }
      dt = std::min(stepper.next_dt(dt_try, err, true), dt_cap);
      emit_due();
      continue;
    }

    // Collision inside the trial step: bisect the sub-step size.
    double theta = 1.0;
    if (gap_full < -snap_tol) {
      auto gap_at = [&](double th) {
        if (th >= 1.0) return gap_full;
        stepper.step(deref, sys.t, y, th * dt_try, yprobe, cfg);
        return rhs->state_min_gap(yprobe);
      };
      theta = locate_collision(gap_at, snap_tol);
      stepper.step(deref, sys.t, y, theta * dt_try, yprobe, cfg);
      y.swap(yprobe);
    } else {
      y.swap(ynew);
    }
    sys.t += theta * dt_try;
    rhs->from_state(y, sys);
    settle_merges();
    rhs->to_state(sys, y);
    stepper.resize(y.size());
    emit_due();
  }

  rhs->from_state(y, sys);
  rhs->refresh_edges(sys, sys.t);
  return result;
}

}  // namespace movpatch
