#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "movpatch/geometry.hpp"
#include "movpatch/lattice.hpp"

namespace movpatch {

struct FullTrajectory {
  std::vector<double> x;
  std::vector<FullFrame> frames;
};

struct PatchFrame {
  double t = 0.0;
  std::vector<Patch> patches;
};

struct PatchTrajectory {
  std::vector<PatchFrame> frames;
};

struct MetricRow {
  double t = 0.0;
  double macro_rmse = 0.0;
  double micro_rmse = 0.0;
  double l2_rel_err = 0.0;
};

using MetricSeries = std::vector<MetricRow>;

// Linear interpolation on a sorted grid; clamps outside the grid.
inline double interp_linear(const std::vector<double>& x, const std::vector<double>& u,
                            double q) {
  if (x.size() < 2 || x.size() != u.size())
    throw std::invalid_argument("interp_linear: bad grid");
  if (q <= x.front()) return u.front();
  if (q >= x.back()) return u.back();
  const auto it = std::upper_bound(x.begin(), x.end(), q);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double w = (q - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - w) * u[k - 1] + w * u[k];
}

// Error metrics of a patch trajectory against a full-domain reference on
// shared snapshot times. Reference values at the moving patch coordinates
// come from linear interpolation of the full-domain grid; the macro metrics
// use the patch macro nodes (centres and meso node pairs).
inline MetricSeries compare(const PatchTrajectory& patches, const FullTrajectory& full) {
  if (patches.frames.size() != full.frames.size())
    throw std::invalid_argument("compare: trajectories have different snapshot counts");
  MetricSeries series;
  series.reserve(patches.frames.size());
  for (std::size_t f = 0; f < patches.frames.size(); ++f) {
    const PatchFrame& pf = patches.frames[f];
    const FullFrame& ff = full.frames[f];
    if (std::abs(pf.t - ff.t) > 1e-9 * std::max(1.0, std::abs(pf.t)))
      throw std::invalid_argument("compare: snapshot times do not match");

    double micro_sq = 0.0;
    std::size_t micro_count = 0;
    double macro_sq = 0.0, ref_sq = 0.0;
    std::size_t macro_count = 0;
    for (const Patch& p : pf.patches) {
      for (long i = -p.n; i <= p.n; ++i) {
        const double r = p.at(i) - interp_linear(full.x, ff.u, p.x(i));
        micro_sq += r * r;
        ++micro_count;
      }
      const auto add_macro = [&](long i) {
        const double ref = interp_linear(full.x, ff.u, p.x(i));
        const double r = p.at(i) - ref;
        macro_sq += r * r;
        ref_sq += ref * ref;
        ++macro_count;
      };
      if (p.kind == PatchKind::ordinary) {
        add_macro(0);
      } else {
        add_macro(p.node_l);
        add_macro(p.node_r);
      }
    }
    MetricRow row;
    row.t = pf.t;
    row.micro_rmse = std::sqrt(micro_sq / static_cast<double>(micro_count));
    row.macro_rmse = std::sqrt(macro_sq / static_cast<double>(macro_count));
    row.l2_rel_err = ref_sq > 0.0 ? std::sqrt(macro_sq / ref_sq)
                                  : (macro_sq > 0.0 ? std::numeric_limits<double>::infinity()
                                                    : 0.0);
    series.push_back(row);
  }
  return series;
}

inline double max_l2_rel(const MetricSeries& s) {
  double m = 0.0;
  for (const auto& r : s) m = std::max(m, r.l2_rel_err);
  return m;
}

inline double max_macro_rmse(const MetricSeries& s) {
  double m = 0.0;
  for (const auto& r : s) m = std::max(m, r.macro_rmse);
  return m;
}

}  // namespace movpatch
