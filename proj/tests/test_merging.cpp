#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "movpatch/lattice.hpp"
#include "movpatch/merging.hpp"

using namespace movpatch;

namespace {

Patch make_patch(PatchKind kind, double x0, long n, double d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  Patch p;
  p.kind = kind;
  p.x0 = x0;
  p.n = n;
  p.d = d;
  p.u.resize(p.points());
  for (double& v : p.u) v = U(rng);
  if (kind == PatchKind::meso) {
    p.node_l = -n / 2;
    p.node_r = n / 2;
  }
  return p;
}

}  // namespace

TEST_CASE("min gap picks the closest pair, ties to the lowest index") {
  PatchSystem sys;
  sys.profile.kappa = 1;
  sys.profile.eps = {0.01};
  sys.profile.gam = {1.0};
  std::mt19937_64 rng(8);
  const double d = 0.01;
  // edges: [0.00,0.10] [0.15,0.25] [0.27,0.37] [0.39,0.49]
  for (double c : {0.05, 0.20, 0.32, 0.44})
    sys.patches.push_back(make_patch(PatchKind::ordinary, c, 5, d, rng));
  const auto g = min_gap(sys);
  CHECK(g.s == 1);
  CHECK(g.gap == Catch::Approx(0.02).margin(1e-15));
}

TEST_CASE("bisection localises a crossing") {
  auto gap = [](double th) { return 0.5 - th; };
  CHECK(locate_collision(gap, 1e-12) == Catch::Approx(0.5).margin(1e-11));
  auto gap_end = [](double th) { return 1e-13 * (1.0 - th); };
  CHECK(locate_collision(gap_end, 1e-12) == 1.0);
  auto no_cross = [](double) { return 1.0; };
  CHECK_THROWS_AS(locate_collision(no_cross, 1e-12), std::invalid_argument);
}

TEST_CASE("ordinary + ordinary merge bookkeeping") {
  std::mt19937_64 rng(9);
  const double d = 0.01;
  const long nl = 10, nr = 15;
  Patch L = make_patch(PatchKind::ordinary, 0.0, nl, d, rng);
  Patch R = make_patch(PatchKind::ordinary, L.right_edge() + nr * d, nr, d, rng);
  const Patch m = merge_patches(L, R, 5);

  CHECK(m.kind == PatchKind::meso);
  CHECK(m.n == nl + nr);
  CHECK(m.points() == 2 * (nl + nr) + 1);
  // grid uniform and aligned: left edge of merged = left edge of L
  CHECK(std::abs(m.left_edge() - L.left_edge()) < 1e-12 * d);
  CHECK(std::abs(m.right_edge() - R.right_edge()) < 1e-12 * d);
  // pre-existing values preserved bitwise
  for (long i = -nl; i < nl; ++i) CHECK(m.at(i + nl - m.n) == L.at(i));
  for (long i = -nr + 1; i <= nr; ++i) CHECK(m.at(i - nr + m.n) == R.at(i));
  // new interior point carries the average of the touching edges
  CHECK(m.at(nl - nr) == 0.5 * (L.at(nl) + R.at(-nr)));
  // macro nodes are the images of the old centres
  CHECK(m.node_l == -nr);
  CHECK(m.node_r == nl);
  CHECK(m.x(m.node_l) == Catch::Approx(L.x0).margin(1e-12));
  CHECK(m.x(m.node_r) == Catch::Approx(R.x0).margin(1e-12));
}

TEST_CASE("meso operands pass their outer nodes through") {
  std::mt19937_64 rng(10);
  const double d = 0.002;
  Patch L = make_patch(PatchKind::meso, 0.0, 20, d, rng);
  Patch R = make_patch(PatchKind::ordinary, L.right_edge() + 10 * d, 10, d, rng);
  const Patch m = merge_patches(L, R, 2);
  CHECK(m.node_l == L.node_l + L.n - m.n);
  CHECK(m.x(m.node_l) == Catch::Approx(L.x(L.node_l)).margin(1e-12));
  CHECK(m.node_r == L.n);  // ordinary right operand: its centre

  // meso on the right: fresh meso placed flush against R's right edge
  Patch M2 = make_patch(PatchKind::meso, R.right_edge() + 20 * d, 20, d, rng);
  const Patch m2 = merge_patches(R, M2, 2);
  CHECK(m2.node_r == M2.node_r - M2.n + m2.n);
  CHECK(m2.x(m2.node_r) == Catch::Approx(M2.x(M2.node_r)).margin(1e-12));
  CHECK(m2.node_l == -M2.n);  // ordinary left operand: its centre
}

TEST_CASE("merge preserves the heterogeneity phase of every point") {
  std::mt19937_64 rng(11);
  HeterogeneityProfile prof;
  prof.kappa = 5;
  prof.eps = {1, 2, 3, 4, 5};
  prof.gam = {6, 7, 8, 9, 10};
  const double d = 0.01;
  const long nl = 10, nr = 25;
  Patch L = make_patch(PatchKind::ordinary, 0.0, nl, d, rng);
  Patch R = make_patch(PatchKind::ordinary, L.right_edge() + nr * d, nr, d, rng);
  const Patch m = merge_patches(L, R, prof.kappa);
  // the merged left edge is phase 0 again, so every retained point keeps
  // the coefficient it had in its original patch
  for (long i = -nl; i <= nl; ++i)
    CHECK(coeff_at(prof, i + nl - m.n, m.n).eps == coeff_at(prof, i, nl).eps);
  for (long i = -nr; i <= nr; ++i)
    CHECK(coeff_at(prof, i - nr + m.n, m.n).eps == coeff_at(prof, i, nr).eps);
}

TEST_CASE("merge rejects misaligned operands") {
  std::mt19937_64 rng(12);
  const double d = 0.01;
  Patch L = make_patch(PatchKind::ordinary, 0.0, 5, d, rng);
  Patch R = make_patch(PatchKind::ordinary, L.right_edge() + 5 * d + 0.3 * d, 5, d, rng);
  CHECK_THROWS_AS(merge_patches(L, R, 1), std::invalid_argument);
  CHECK_THROWS_AS(merge_patches(L, L, 2), std::invalid_argument);  // 5 % 2 != 0
}

TEST_CASE("merge_at snaps, compacts the list, and logs the event") {
  PatchSystem sys;
  sys.profile.kappa = 1;
  sys.profile.eps = {0.01};
  sys.profile.gam = {1.0};
  std::mt19937_64 rng(13);
  const double d = 0.01;
  Patch A = make_patch(PatchKind::ordinary, 0.0, 5, d, rng);
  Patch B = make_patch(PatchKind::ordinary, 0.1 + 1e-13, 5, d, rng);  // nearly touching
  Patch C = make_patch(PatchKind::ordinary, 0.5, 5, d, rng);
  sys.patches = {A, B, C};
  const auto ev = merge_at(sys, 0, 1.25);
  REQUIRE(sys.patches.size() == 2);
  CHECK(sys.patches[0].kind == PatchKind::meso);
  CHECK(sys.patches[0].n == 10);
  CHECK(sys.patches[1].x0 == 0.5);
  CHECK(ev.t == 1.25);
  CHECK(ev.s == 0);
  CHECK(ev.n_left == 5);
  CHECK(ev.n_right == 5);
  CHECK(ev.x == Catch::Approx(0.05).margin(1e-12));
}

TEST_CASE("randomized merge bookkeeping holds across kappa values") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<int> kpick(0, 3);
  std::uniform_int_distribution<int> npick(1, 8);
  const int kappas[] = {1, 2, 3, 5};
  for (int trial = 0; trial < 100; ++trial) {
    const long kappa = kappas[kpick(rng)];
    const long nl = kappa * npick(rng), nr = kappa * npick(rng);
    const double d = 0.001 + 0.01 * std::generate_canonical<double, 53>(rng);
    Patch L = make_patch(trial % 2 ? PatchKind::meso : PatchKind::ordinary, 0.3, nl, d, rng);
    if (L.kind == PatchKind::meso) {
      L.node_l = -kappa * std::max<long>(1, nl / (2 * kappa));
      L.node_r = -L.node_l;
    }
    Patch R = make_patch(PatchKind::ordinary, L.right_edge() + nr * d, nr, d, rng);
    const Patch m = merge_patches(L, R, kappa);
    CHECK(m.points() == static_cast<std::size_t>(2 * (nl + nr) + 1));
    CHECK(m.n % kappa == 0);
    CHECK(std::abs(m.left_edge() - L.left_edge()) <= 1e-12 * d * (2 * m.n));
    for (long i = -nl; i < nl; ++i) REQUIRE(m.at(i + nl - m.n) == L.at(i));
    for (long i = -nr + 1; i <= nr; ++i) REQUIRE(m.at(i - nr + m.n) == R.at(i));
  }
}
