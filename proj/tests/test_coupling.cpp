#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "movpatch/coupling.hpp"
#include "movpatch/geometry.hpp"

using namespace movpatch;

namespace {

// Small hand-built system: P unit-spaced patches on [0, P], selected
// indices upgraded to meso-patches.
PatchSystem toy_system(std::size_t P, const std::set<std::size_t>& meso, int Gamma) {
  PatchSystem sys;
  sys.a = 0.0;
  sys.b = static_cast<double>(P);
  sys.Gamma = Gamma;
  sys.profile.kappa = 1;
  sys.profile.eps = {0.01};
  sys.profile.gam = {1.0};
  auto zero = [](double) { return 0.0; };
  sys.bc = {zero, zero};
  for (std::size_t j = 0; j < P; ++j) {
    Patch p;
    p.d = 0.02;
    p.x0 = 0.5 + static_cast<double>(j);
    if (meso.count(j)) {
      p.kind = PatchKind::meso;
      p.n = 8;
      p.node_l = -4;
      p.node_r = 4;
    } else {
      p.n = 2;
    }
    p.u.assign(p.points(), 0.0);
    sys.patches.push_back(std::move(p));
  }
  return sys;
}

// Independent naive interpolation: explicit double loop, no shared code
// with lagrange_value.
double naive_lagrange(const std::vector<double>& X, const std::vector<double>& U, double x) {
  double total = 0.0;
  for (std::size_t k = 0; k < X.size(); ++k) {
    double num = 1.0, den = 1.0;
    for (std::size_t l = 0; l < X.size(); ++l) {
      if (l == k) continue;
      num *= x - X[l];
      den *= X[k] - X[l];
    }
    total += U[k] * num / den;
  }
  return total;
}

}  // namespace

TEST_CASE("interpolation weights at the midpoint-of-first-interval query") {
  const std::vector<double> X = {0.0, 1.0, 2.0};
  CHECK(lagrange_value(X, {1.0, 0.0, 0.0}, 0.5) == Catch::Approx(0.375).epsilon(1e-14));
  CHECK(lagrange_value(X, {0.0, 1.0, 0.0}, 0.5) == Catch::Approx(0.75).epsilon(1e-14));
  CHECK(lagrange_value(X, {0.0, 0.0, 1.0}, 0.5) == Catch::Approx(-0.125).epsilon(1e-14));
}

TEST_CASE("constant data reproduced exactly (partition of unity)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.05, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> X(7);
    double x = 0.0;
    for (double& xi : X) x = xi = x + U(rng);
    const double c = U(rng);
    const std::vector<double> vals(X.size(), c);
    const double q = X[2] + 0.3 * (X[3] - X[2]);
    CHECK(lagrange_value(X, vals, q) == Catch::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("polynomials up to the node-count degree are exact") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int deg = 1; deg <= 6; ++deg) {
    std::vector<double> coef(static_cast<std::size_t>(deg) + 1);
    for (double& c : coef) c = U(rng);
    auto poly = [&](double x) {
      double acc = 0.0;
      for (std::size_t k = coef.size(); k-- > 0;) acc = acc * x + coef[k];
      return acc;
    };
    std::vector<double> X, V;
    for (int k = 0; k <= deg; ++k) {
      X.push_back(static_cast<double>(k) + 0.2 * U(rng));
      V.push_back(poly(X.back()));
    }
    const double q = 0.5 * (X[0] + X.back());
    CHECK(lagrange_value(X, V, q) == Catch::Approx(poly(q)).margin(1e-10));
  }
}

TEST_CASE("duplicate nodes are rejected") {
  CHECK_THROWS_AS(lagrange_value({1.0, 1.0}, {0.0, 1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("neighbour window without meso-patches is centred") {
  const auto sys = toy_system(10, {}, 2);
  const auto view = macro_view(sys);
  CHECK(neighbor_set(sys, view, 5, NodeSide::left) ==
        std::vector<std::size_t>{3, 4, 5, 6, 7});
  // near the domain boundary the window shifts to stay inside
  CHECK(neighbor_set(sys, view, 1, NodeSide::left) ==
        std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(neighbor_set(sys, view, 8, NodeSide::right) ==
        std::vector<std::size_t>{5, 6, 7, 8, 9});
}

TEST_CASE("meso-patches clip the window; bandwidth is kept by extension") {
  // patches 0..9, patch 6 is meso; view indices: centers 0..5, meso nodes
  // 6 (left) and 7 (right), then centers 8, 9, 10.
  const auto sys = toy_system(10, {6}, 2);
  const auto view = macro_view(sys);
  REQUIRE(view.size() == 11);
  REQUIRE(view[6].side == NodeSide::left);
  REQUIRE(view[7].side == NodeSide::right);

  // query left edge of patch 5: clipped at the meso's left node, extended
  // left to keep 5 nodes
  CHECK(neighbor_set(sys, view, 5, NodeSide::left) ==
        std::vector<std::size_t>{2, 3, 4, 5, 6});
  // query from the right side of the meso: its right node plus the next
  // ordinary centres
  CHECK(neighbor_set(sys, view, 7, NodeSide::left) ==
        std::vector<std::size_t>{7, 8, 9, 10});
  CHECK(neighbor_set(sys, view, 8, NodeSide::right) ==
        std::vector<std::size_t>{7, 8, 9, 10});
  // the meso's own left edge looks left only
  CHECK(neighbor_set(sys, view, 6, NodeSide::left) ==
        std::vector<std::size_t>{2, 3, 4, 5, 6});
  // the meso's own right edge looks right only
  CHECK(neighbor_set(sys, view, 6, NodeSide::right) ==
        std::vector<std::size_t>{7, 8, 9, 10});
}

TEST_CASE("two nearby meso-patches degrade the window gracefully") {
  const auto sys = toy_system(10, {3, 6}, 2);
  const auto view = macro_view(sys);
  // centers 0,1,2 -> view 0,1,2; meso3 nodes 3,4; centers 4,5 -> view 5,6;
  // meso6 nodes 7,8; centers 7,8,9 -> view 9,10,11
  CHECK(neighbor_set(sys, view, 5, NodeSide::left) ==
        std::vector<std::size_t>{4, 5, 6, 7});
  CHECK(neighbor_set(sys, view, 4, NodeSide::right) ==
        std::vector<std::size_t>{4, 5, 6, 7});
}

TEST_CASE("edge values match a naive oracle and the boundary takes bc") {
  auto sys = toy_system(10, {6}, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (auto& p : sys.patches)
    for (double& v : p.u) v = U(rng);
  sys.bc = {[](double t) { return 0.25 + t; }, [](double t) { return -0.5 * t; }};

  const auto view = macro_view(sys);
  const auto ev = compute_edge_values(sys, view, 2.0);
  CHECK(ev.left[0] == 2.25);
  CHECK(ev.right[9] == -1.0);
  for (std::size_t j = 0; j < sys.patches.size(); ++j) {
    for (NodeSide edge : {NodeSide::left, NodeSide::right}) {
      if ((j == 0 && edge == NodeSide::left) || (j == 9 && edge == NodeSide::right)) continue;
      const auto nodes = neighbor_set(sys, view, j, edge);
      std::vector<double> X, V;
      for (auto k : nodes) {
        X.push_back(view[k].X);
        V.push_back(view[k].U);
      }
      const double xe = edge == NodeSide::left ? sys.patches[j].left_edge()
                                               : sys.patches[j].right_edge();
      const double got = edge == NodeSide::left ? ev.left[j] : ev.right[j];
      const double want = naive_lagrange(X, V, xe);
      CHECK(got == Catch::Approx(want).epsilon(1e-12).margin(1e-13));
    }
  }
}
