#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "movpatch/geometry.hpp"

namespace movpatch {

// Classic Lagrange interpolation, product form.
inline double lagrange_value(const double* X, const double* U, std::size_t m, double x) {
  if (m == 0) throw std::invalid_argument("lagrange_value: no nodes");
  double acc = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double w = 1.0;
    for (std::size_t l = 0; l < m; ++l) {
      if (l == k) continue;
      const double denom = X[k] - X[l];
      if (denom == 0.0) throw std::invalid_argument("lagrange_value: duplicate node positions");
      w *= (x - X[l]) / denom;
    }
    acc += w * U[k];
  }
  return acc;
}

inline double lagrange_value(const std::vector<double>& X, const std::vector<double>& U,
                             double x) {
  return lagrange_value(X.data(), U.data(), X.size(), x);
}

namespace detail {

// Node index of the macro node nearest to a patch edge (the querying
// patch's own near node).
inline std::size_t near_node_index(const MacroView& view, std::size_t patch, NodeSide edge) {
  for (std::size_t k = 0; k < view.size(); ++k) {
    if (view[k].patch != patch) continue;
    if (view[k].side == NodeSide::center) return k;
    if (view[k].side == edge) return k;
  }
  throw std::logic_error("near_node_index: patch has no node");
}

}  // namespace detail

// Shock-aware neighbour selection: the baseline window of 2*Gamma+1 nodes
// around the querying node, clipped so it never crosses a meso-patch (a
// meso contributes only its node on the querying side) and re-extended on
// the open side to keep a constant bandwidth where enough nodes exist.
// Returns indices into the macro view.
inline std::vector<std::size_t> neighbor_set(const PatchSystem& sys, const MacroView& view,
                                             std::size_t patch, NodeSide edge) {
  if (edge == NodeSide::center) throw std::invalid_argument("neighbor_set: edge must be l or r");
  const std::size_t M = view.size();
  const std::size_t q = detail::near_node_index(view, patch, edge);

  // Region walls: the nearest meso node facing the query from each side.
  std::size_t lo = 0;
  std::size_t hi = M - 1;
  const bool self_meso = sys.patches[patch].kind == PatchKind::meso;
  if (self_meso && edge == NodeSide::left) hi = q;
  if (self_meso && edge == NodeSide::right) lo = q;
  for (std::size_t k = q; k-- > lo;) {
    if (view[k].side == NodeSide::right && view[k].patch != patch) {
      lo = k;
      break;
    }
  }
  for (std::size_t k = q + 1; k <= hi; ++k) {
    if (view[k].side == NodeSide::left && view[k].patch != patch) {
      hi = k;
      break;
    }
  }

  const std::size_t width = static_cast<std::size_t>(2 * sys.Gamma);
  std::size_t start = q > width / 2 ? q - width / 2 : 0;  // q - Gamma, saturated
  const std::size_t start_cap = hi >= lo + width ? hi - width : lo;
  if (start < lo) start = lo;
  if (start > start_cap) start = start_cap;
  const std::size_t end = std::min(hi, start + width);
  if (end - start + 1 < 2)
    throw std::runtime_error("neighbor_set: fewer than 2 nodes available for interpolation");

  std::vector<std::size_t> out;
  out.reserve(end - start + 1);
  for (std::size_t k = start; k <= end; ++k) out.push_back(k);
  return out;
}

// Edge values for every patch: Dirichlet at the domain boundary, Lagrange
// interpolation of the neighbour-set macro nodes everywhere else.
struct EdgeValues {
  std::vector<double> left;
  std::vector<double> right;
};

inline EdgeValues compute_edge_values(const PatchSystem& sys, const MacroView& view,
                                      double t) {
  const std::size_t P = sys.patches.size();
  EdgeValues ev;
  ev.left.resize(P);
  ev.right.resize(P);
  std::vector<double> X, U;
  for (std::size_t j = 0; j < P; ++j) {
    const Patch& p = sys.patches[j];
    for (NodeSide edge : {NodeSide::left, NodeSide::right}) {
      double& slot = edge == NodeSide::left ? ev.left[j] : ev.right[j];
      if (j == 0 && edge == NodeSide::left) {
        slot = sys.bc.left(t);
        continue;
      }
      if (j == P - 1 && edge == NodeSide::right) {
        slot = sys.bc.right(t);
        continue;
      }
      const auto nodes = neighbor_set(sys, view, j, edge);
      X.clear();
      U.clear();
      for (std::size_t k : nodes) {
        X.push_back(view[k].X);
        U.push_back(view[k].U);
      }
      const double xe = edge == NodeSide::left ? p.left_edge() : p.right_edge();
      slot = lagrange_value(X, U, xe);
    }
  }
  return ev;
}

inline EdgeValues compute_edge_values(const PatchSystem& sys, double t) {
  return compute_edge_values(sys, macro_view(sys), t);
}

}  // namespace movpatch
