#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "movpatch/heterogeneity.hpp"
#include "movpatch/lattice.hpp"

namespace movpatch {

enum class PatchKind { ordinary, meso };

// A rigid micro-grid segment: 2n+1 points at x0 + d*i, i = -n..n.
struct Patch {
  PatchKind kind = PatchKind::ordinary;
  double x0 = 0.0;  // position of micro index 0
  long n = 0;       // half-count of micro intervals
  double d = 0.0;
  std::vector<double> u;  // 2n+1 values
  long node_l = 0;        // micro index of the left macro node
  long node_r = 0;        // micro index of the right macro node
  bool boundary_fixed = false;

  double x(long i) const { return x0 + d * static_cast<double>(i); }
  double left_edge() const { return x(-n); }
  double right_edge() const { return x(n); }
  std::size_t points() const { return static_cast<std::size_t>(2 * n + 1); }
  double& at(long i) { return u[static_cast<std::size_t>(i + n)]; }
  double at(long i) const { return u[static_cast<std::size_t>(i + n)]; }
};

struct PatchSystem {
  std::vector<Patch> patches;  // sorted by position, non-overlapping
  double a = 0.0, b = 1.0;
  int Gamma = 1;
  HeterogeneityProfile profile;
  BoundaryCondition bc;
  bool boundary_patches_fixed = true;
  double t = 0.0;

  std::size_t total_micro_points() const {
    std::size_t s = 0;
    for (const auto& p : patches) s += p.points();
    return s;
  }
  double covered_fraction() const {
    double s = 0.0;
    for (const auto& p : patches) s += 2.0 * static_cast<double>(p.n) * p.d;
    return s / (b - a);
  }
};

enum class NodeSide { left, right, center };

struct MacroNode {
  double X;
  double U;
  std::size_t patch;
  NodeSide side;
};

using MacroView = std::vector<MacroNode>;

// Pure projection of the macro-scale state: one node per ordinary patch,
// two per meso-patch.
inline MacroView macro_view(const PatchSystem& sys) {
  MacroView view;
  view.reserve(sys.patches.size() + 4);
  for (std::size_t j = 0; j < sys.patches.size(); ++j) {
    const Patch& p = sys.patches[j];
    if (p.kind == PatchKind::ordinary) {
      view.push_back({p.x(0), p.at(0), j, NodeSide::center});
    } else {
      view.push_back({p.x(p.node_l), p.at(p.node_l), j, NodeSide::left});
      view.push_back({p.x(p.node_r), p.at(p.node_r), j, NodeSide::right});
    }
  }
  for (std::size_t k = 1; k < view.size(); ++k)
    if (!(view[k - 1].X < view[k].X))
      throw std::runtime_error("macro_view: node positions not strictly increasing");
  return view;
}

struct MesoSpec {
  double center;
  long n;
};

struct SystemLayout {
  double a, b, d;
  int count_ordinary;  // includes the two boundary patches
  long n_ordinary;
  std::vector<MesoSpec> meso;
  int Gamma = 1;
  bool boundary_patches_fixed = true;
};

namespace detail {

// Largest-remainder apportionment of m items over weights w.
inline std::vector<int> apportion(int m, const std::vector<double>& w) {
  const double tot = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<int> out(w.size(), 0);
  if (m <= 0 || !(tot > 0.0)) return out;
  std::vector<std::pair<double, std::size_t>> rem;
  int assigned = 0;
  for (std::size_t g = 0; g < w.size(); ++g) {
    const double share = m * w[g] / tot;
    out[g] = static_cast<int>(std::floor(share));
    assigned += out[g];
    rem.push_back({share - std::floor(share), g});
  }
  std::sort(rem.begin(), rem.end(), [](auto& l, auto& r) {
    if (l.first != r.first) return l.first > r.first;
    return l.second < r.second;
  });
  for (int k = 0; k < m - assigned; ++k) out[rem[static_cast<std::size_t>(k)].second] += 1;
  return out;
}

inline long round_to_multiple(double value, long kappa) {
  return kappa * std::llround(value / static_cast<double>(kappa));
}

}  // namespace detail

// Build the initial patch system: two boundary patches whose outer micro
// edges coincide with the domain ends, pre-placed meso-patches at the
// configured centres, and the remaining ordinary patches spread evenly in
// the gaps between those anchors.
inline PatchSystem build_system(const SystemLayout& layout,
                                const HeterogeneityProfile& profile,
                                const BoundaryCondition& bc,
                                const std::function<double(double)>& ic) {
  if (layout.count_ordinary < 2)
    throw std::invalid_argument("build_system: need at least 2 ordinary patches");
  if (!(layout.d > 0.0) || !(layout.a < layout.b))
    throw std::invalid_argument("build_system: bad domain or spacing");
  const long kappa = profile.kappa;
  auto check_n = [&](long n) {
    if (n < 1 || n % kappa != 0)
      throw std::invalid_argument("build_system: patch half-count " + std::to_string(n) +
                                  " is not a positive multiple of kappa=" +
                                  std::to_string(kappa));
  };
  check_n(layout.n_ordinary);
  for (const auto& m : layout.meso) check_n(m.n);

  const double h_ord = static_cast<double>(layout.n_ordinary) * layout.d;
  std::vector<MesoSpec> meso = layout.meso;
  std::sort(meso.begin(), meso.end(),
            [](const MesoSpec& l, const MesoSpec& r) { return l.center < r.center; });

  // Anchor centres and half-widths: boundary patches plus pre-placed mesos.
  std::vector<double> anchor_c{layout.a + h_ord};
  std::vector<double> anchor_h{h_ord};
  for (const auto& m : meso) {
    anchor_c.push_back(m.center);
    anchor_h.push_back(static_cast<double>(m.n) * layout.d);
  }
  anchor_c.push_back(layout.b - h_ord);
  anchor_h.push_back(h_ord);

  std::vector<double> free_len(anchor_c.size() - 1);
  for (std::size_t g = 0; g + 1 < anchor_c.size(); ++g) {
    free_len[g] = (anchor_c[g + 1] - anchor_h[g + 1]) - (anchor_c[g] + anchor_h[g]);
    if (free_len[g] < 0.0)
      throw std::invalid_argument("build_system: anchor patches overlap");
  }
  const std::vector<int> per_gap =
      detail::apportion(layout.count_ordinary - 2, free_len);

  PatchSystem sys;
  sys.a = layout.a;
  sys.b = layout.b;
  sys.Gamma = layout.Gamma;
  sys.profile = profile;
  sys.bc = bc;
  sys.boundary_patches_fixed = layout.boundary_patches_fixed;

  // Movable patches are snapped onto the global coefficient lattice
  // (multiples of kappa*d from the left domain end) so every micro point
  // carries the same coefficient it would on a full-domain grid.
  const double period = static_cast<double>(kappa) * layout.d;
  auto add_patch = [&](PatchKind kind, double center, long n, bool fixed, bool snap) {
    if (snap) center = layout.a + period * std::round((center - layout.a) / period);
    Patch p;
    p.kind = kind;
    p.x0 = center;
    p.n = n;
    p.d = layout.d;
    p.boundary_fixed = fixed;
    p.u.resize(p.points());
    for (long i = -n; i <= n; ++i) p.at(i) = ic(p.x(i));
    if (kind == PatchKind::meso) {
      long k = detail::round_to_multiple(static_cast<double>(n) / 2.0, kappa);
      k = std::clamp(k, kappa, n);
      p.node_l = -k;
      p.node_r = k;
    }
    sys.patches.push_back(std::move(p));
  };

  for (std::size_t g = 0; g < anchor_c.size(); ++g) {
    const bool is_meso = g > 0 && g + 1 < anchor_c.size();
    const bool fixed = !is_meso && layout.boundary_patches_fixed;
    add_patch(is_meso ? PatchKind::meso : PatchKind::ordinary, anchor_c[g],
              is_meso ? meso[g - 1].n : layout.n_ordinary, fixed, is_meso);
    if (g + 1 < anchor_c.size()) {
      // equal free gaps between adjacent patch edges; with equal widths this
      // reduces to evenly spaced centres
      const int m = per_gap[g];
      const double gap =
          (free_len[g] - 2.0 * h_ord * static_cast<double>(m)) / static_cast<double>(m + 1);
      if (gap < 0.0)
        throw std::invalid_argument("build_system: patches do not fit between anchors");
      double cursor = anchor_c[g] + anchor_h[g];
      for (int k = 1; k <= m; ++k) {
        cursor += gap + h_ord;
        add_patch(PatchKind::ordinary, cursor, layout.n_ordinary, false, true);
        cursor += h_ord;
      }
    }
  }

  std::sort(sys.patches.begin(), sys.patches.end(),
            [](const Patch& l, const Patch& r) { return l.x0 < r.x0; });
  for (std::size_t j = 1; j < sys.patches.size(); ++j) {
    if (sys.patches[j].left_edge() - sys.patches[j - 1].right_edge() < 0.0)
      throw std::invalid_argument("build_system: patches overlap at construction");
  }
  // Pin the Dirichlet points exactly.
  sys.patches.front().at(-sys.patches.front().n) = bc.left(0.0);
  sys.patches.back().at(sys.patches.back().n) = bc.right(0.0);
  return sys;
}

}  // namespace movpatch
