#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace movpatch {

struct IntegratorConfig {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  double dt_init = 0.0;  // 0 = choose automatically
  double dt_min = 1e-14;
  double dt_max = 0.0;  // 0 = no explicit cap (drivers apply the diffusion cap)
  long max_steps = 200'000'000;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::invalid_argument("integrator: tolerances must be > 0");
    if (dt_init != 0.0 && dt_max != 0.0 && !(dt_min <= dt_init && dt_init <= dt_max))
      throw std::invalid_argument("integrator: need dt_min <= dt_init <= dt_max");
  }
};

// Dormand-Prince 5(4) embedded pair with FSAL. Works on flat state vectors;
// the caller owns the right-hand side and the acceptance loop.
class Rk45 {
 public:
  explicit Rk45(std::size_t dim) { resize(dim); }

  void resize(std::size_t dim) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_}) v->assign(dim, 0.0);
    have_k1_ = false;
  }

  std::size_t dim() const { return ytmp_.size(); }

  // Invalidate the cached FSAL derivative (call after any state jump).
  void reset() { have_k1_ = false; }

  // One trial step from (t, y) of size dt. Writes the candidate state into
  // ynew and returns the scaled error norm (accept iff <= 1).
  template <class Rhs>
  double step(Rhs&& rhs, double t, const std::vector<double>& y, double dt,
              std::vector<double>& ynew, const IntegratorConfig& cfg) {
    const std::size_t n = y.size();
    if (n != ytmp_.size()) resize(n);
    if (!have_k1_) {
      rhs(t, y, k1_);
      have_k1_ = true;
    }

    auto stage = [&](const double* a, int m) {
      const std::vector<double>* ks[6] = {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_};
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int q = 0; q < m; ++q) acc += a[q] * (*ks[q])[i];
        ytmp_[i] = y[i] + dt * acc;
      }
    };

    static constexpr double a2[] = {1.0 / 5};
    static constexpr double a3[] = {3.0 / 40, 9.0 / 40};
    static constexpr double a4[] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
    static constexpr double a5[] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                    -212.0 / 729};
    static constexpr double a6[] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                    49.0 / 176, -5103.0 / 18656};
    static constexpr double b[] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784, 11.0 / 84};
    // b - bhat (embedded 4th order weights), including the k7 term.
    static constexpr double e[] = {71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

    stage(a2, 1);
    rhs(t + dt / 5, ytmp_, k2_);
    stage(a3, 2);
    rhs(t + 3 * dt / 10, ytmp_, k3_);
    stage(a4, 3);
    rhs(t + 4 * dt / 5, ytmp_, k4_);
    stage(a5, 4);
    rhs(t + 8 * dt / 9, ytmp_, k5_);
    stage(a6, 5);
    rhs(t + dt, ytmp_, k6_);

    ynew.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + dt * (b[0] * k1_[i] + b[2] * k3_[i] + b[3] * k4_[i] +
                             b[4] * k5_[i] + b[5] * k6_[i]);
    }
    rhs(t + dt, ynew, k7_);

    double err2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double le = dt * (e[0] * k1_[i] + e[2] * k3_[i] + e[3] * k4_[i] +
                              e[4] * k5_[i] + e[5] * k6_[i] + e[6] * k7_[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = le / sc;
      err2 += r * r;
    }
    double err = std::sqrt(err2 / static_cast<double>(n));
    // a non-finite candidate or error estimate must count as a rejection
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
    pending_fsal_ = true;
    return err;
  }

  // Commit the last trial step: k7 becomes the next k1 (FSAL).
  void accept() {
    if (pending_fsal_) {
      std::swap(k1_, k7_);
      have_k1_ = true;
      pending_fsal_ = false;
    }
  }

  // PI step-size controller; err is the scaled norm of the last trial step.
  double next_dt(double dt, double err, bool accepted) {
    constexpr double order = 5.0;
    constexpr double safety = 0.9;
    double factor;
    if (err <= std::numeric_limits<double>::min()) {
      factor = 5.0;
    } else if (accepted) {
      factor = safety * std::pow(err, -0.7 / order) * std::pow(err_prev_, 0.4 / order);
      factor = std::clamp(factor, 0.2, 5.0);
      err_prev_ = std::max(err, 1e-10);
    } else if (!std::isfinite(err)) {
      factor = 0.1;
    } else {
      factor = std::clamp(safety * std::pow(err, -1.0 / order), 0.1, 1.0);
    }
    return dt * factor;
  }

 private:
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_;
  bool have_k1_ = false;
  bool pending_fsal_ = false;
  double err_prev_ = 1.0;
};

}  // namespace movpatch
