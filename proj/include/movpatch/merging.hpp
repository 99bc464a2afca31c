#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "movpatch/geometry.hpp"

namespace movpatch {

struct GapInfo {
  std::size_t s = 0;   // left patch index of the closest pair
  double gap = 0.0;    // x_{s+1,-n} - x_{s,n}
};

// Closest adjacent pair; ties break to the lowest index.
inline GapInfo min_gap(const PatchSystem& sys) {
  if (sys.patches.size() < 2) throw std::invalid_argument("min_gap: need >= 2 patches");
  GapInfo best{0, sys.patches[1].left_edge() - sys.patches[0].right_edge()};
  for (std::size_t j = 1; j + 1 < sys.patches.size(); ++j) {
    const double g = sys.patches[j + 1].left_edge() - sys.patches[j].right_edge();
    if (g < best.gap) best = {j, g};
  }
  return best;
}

// Event localisation by bisection: gap_at(theta) re-integrates the trial
// step scaled by theta in (0,1] and reports the resulting minimum gap.
// Requires gap_at(0) > 0 >= gap_at(1); returns theta with |gap| <= tol.
inline double locate_collision(const std::function<double(double)>& gap_at, double tol,
                               int max_iter = 128) {
  double lo = 0.0, hi = 1.0;
  double g_hi = gap_at(1.0);
  if (g_hi > tol) throw std::invalid_argument("locate_collision: no crossing in the step");
  if (std::abs(g_hi) <= tol) return 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double g = gap_at(mid);
    if (std::abs(g) <= tol) return mid;
    if (g > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("locate_collision: bisection failed to converge");
}

struct MergeEvent {
  double t = 0.0;
  double x = 0.0;       // collision location
  std::size_t s = 0;    // left patch index at merge time
  long n_left = 0;
  long n_right = 0;
};

// Merge two patches whose edges coincide (to snap tolerance) into one
// meso-patch. Index map: i' = i + n_l - n' for the left operand and
// i' = i - n_r + n' for the right; the shared edge point becomes the one
// new interior point at i' = n_l - n_r with the average edge value.
inline Patch merge_patches(const Patch& left, const Patch& right, long kappa) {
  if (left.n % kappa != 0 || right.n % kappa != 0)
    throw std::invalid_argument("merge_patches: half-counts not multiples of kappa");
  const double d = left.d;
  if (std::abs(right.left_edge() - left.right_edge()) > 1e-9 * d)
    throw std::invalid_argument("merge_patches: edges do not coincide");

  const long nl = left.n, nr = right.n, np = nl + nr;
  Patch m;
  m.kind = PatchKind::meso;
  m.n = np;
  m.d = d;
  m.boundary_fixed = left.boundary_fixed || right.boundary_fixed;
  const double x_join = 0.5 * (left.right_edge() + right.left_edge());
  m.x0 = x_join - static_cast<double>(nl - nr) * d;

  m.u.resize(m.points());
  for (long i = -nl; i < nl; ++i) m.at(i + nl - np) = left.at(i);
  m.at(nl - nr) = 0.5 * (left.at(nl) + right.at(-nr));
  for (long i = -nr + 1; i <= nr; ++i) m.at(i - nr + np) = right.at(i);

  m.node_l = (left.kind == PatchKind::meso ? left.node_l : 0) + nl - np;
  m.node_r = (right.kind == PatchKind::meso ? right.node_r : 0) - nr + np;
  return m;
}

// Snap the colliding edges of pair (s, s+1) to exact coincidence, merge,
// and compact the patch list (higher indices shift down by one).
inline MergeEvent merge_at(PatchSystem& sys, std::size_t s, double t) {
  if (s + 1 >= sys.patches.size()) throw std::invalid_argument("merge_at: bad index");
  Patch& L = sys.patches[s];
  Patch& R = sys.patches[s + 1];
  const double x_join = 0.5 * (L.right_edge() + R.left_edge());
  L.x0 = x_join - static_cast<double>(L.n) * L.d;
  R.x0 = x_join + static_cast<double>(R.n) * R.d;

  MergeEvent ev{t, x_join, s, L.n, R.n};
  Patch merged = merge_patches(L, R, sys.profile.kappa);
  sys.patches[s] = std::move(merged);
  sys.patches.erase(sys.patches.begin() + static_cast<long>(s) + 1);
  return ev;
}

}  // namespace movpatch
