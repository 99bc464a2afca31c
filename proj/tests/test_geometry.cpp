#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "movpatch/examples.hpp"
#include "movpatch/geometry.hpp"

using namespace movpatch;

namespace {

PatchSystem build_from(const RunConfig& cfg) {
  return build_system(make_layout(cfg), make_profile(cfg.het), make_bc(cfg), make_ic(cfg));
}

}  // namespace

TEST_CASE("patch coordinate helpers") {
  Patch p;
  p.x0 = 1.0;
  p.n = 5;
  p.d = 0.1;
  p.u.assign(p.points(), 0.0);
  CHECK(p.points() == 11);
  CHECK(p.left_edge() == Catch::Approx(0.5));
  CHECK(p.right_edge() == Catch::Approx(1.5));
  CHECK(p.x(2) == Catch::Approx(1.2));
  p.at(-5) = 7.0;
  CHECK(p.u.front() == 7.0);
}

TEST_CASE("example-1 layout: 26 patches flush with the domain ends") {
  const auto sys = build_from(builtin_example(1));
  constexpr double pi = std::numbers::pi;
  REQUIRE(sys.patches.size() == 26);
  for (const auto& p : sys.patches) {
    CHECK(p.kind == PatchKind::ordinary);
    CHECK(p.n == 25);
  }
  CHECK(sys.patches.front().left_edge() == Catch::Approx(-pi).margin(1e-12));
  CHECK(sys.patches.back().right_edge() == Catch::Approx(pi).margin(1e-12));
  CHECK(sys.patches.front().boundary_fixed);
  CHECK(sys.patches.back().boundary_fixed);
  // interior patches are movable
  for (std::size_t j = 1; j + 1 < sys.patches.size(); ++j)
    CHECK_FALSE(sys.patches[j].boundary_fixed);
  // coverage: 26 patches of width 2*25*d over 2*pi
  const double d = sys.patches.front().d;
  CHECK(sys.covered_fraction() ==
        Catch::Approx(26.0 * 2.0 * 25.0 * d / (2.0 * pi)).epsilon(1e-12));
  // nearly uniform macro spacing (centres snap to the coefficient lattice)
  const auto view = macro_view(sys);
  REQUIRE(view.size() == 26);
  const double H = view[1].X - view[0].X;
  for (std::size_t k = 1; k < view.size(); ++k)
    CHECK(view[k].X - view[k - 1].X == Catch::Approx(H).margin(10.0 * d));
  // initial values sample the initial condition
  for (const auto& p : sys.patches)
    for (long i = -p.n; i <= p.n; ++i) {
      if ((&p == &sys.patches.front() && i == -p.n) ||
          (&p == &sys.patches.back() && i == p.n))
        continue;  // Dirichlet-pinned
      CHECK(p.at(i) == Catch::Approx(-std::sin(p.x(i))).margin(1e-15));
    }
}

TEST_CASE("example-2 layout: pre-placed meso-patches") {
  const auto sys = build_from(builtin_example(2));
  REQUIRE(sys.patches.size() == 30);
  int meso_count = 0;
  for (const auto& p : sys.patches) {
    if (p.kind == PatchKind::meso) {
      ++meso_count;
      CHECK(p.n == 150);
      CHECK((p.x0 == Catch::Approx(2.0).margin(0.005) ||
             p.x0 == Catch::Approx(4.0).margin(0.005)));
      CHECK(p.node_l < 0);
      CHECK(p.node_r > 0);
      CHECK(p.node_l % 3 == 0);
      CHECK(p.node_r % 3 == 0);
    } else {
      CHECK(p.n == 15);
    }
  }
  CHECK(meso_count == 2);
  // sorted and non-overlapping
  for (std::size_t j = 1; j < sys.patches.size(); ++j)
    CHECK(sys.patches[j].left_edge() >= sys.patches[j - 1].right_edge());
  // macro view: one node per ordinary patch, two per meso
  CHECK(macro_view(sys).size() == 28 + 2 * 2);
}

TEST_CASE("macro view is ordered and rejects disorder") {
  auto sys = build_from(builtin_example(1));
  CHECK_NOTHROW(macro_view(sys));
  std::swap(sys.patches[3].x0, sys.patches[7].x0);
  CHECK_THROWS_AS(macro_view(sys), std::runtime_error);
}

TEST_CASE("construction rejects bad layouts") {
  auto cfg = builtin_example(2);
  SECTION("half-count not a multiple of kappa") {
    auto lay = make_layout(cfg);
    lay.n_ordinary = 14;  // kappa is 3
    CHECK_THROWS_AS(build_system(lay, make_profile(cfg.het), make_bc(cfg), make_ic(cfg)),
                    std::invalid_argument);
  }
  SECTION("overlapping meso anchors") {
    auto lay = make_layout(cfg);
    lay.meso = {{2.0, 150}, {2.1, 150}};  // widths 0.48 around centres 0.1 apart
    CHECK_THROWS_AS(build_system(lay, make_profile(cfg.het), make_bc(cfg), make_ic(cfg)),
                    std::invalid_argument);
  }
  SECTION("fewer than two ordinary patches") {
    auto lay = make_layout(cfg);
    lay.count_ordinary = 1;
    CHECK_THROWS_AS(build_system(lay, make_profile(cfg.het), make_bc(cfg), make_ic(cfg)),
                    std::invalid_argument);
  }
}

TEST_CASE("largest-remainder apportionment") {
  CHECK(detail::apportion(5, {1.0, 1.0}) == std::vector<int>{3, 2});
  CHECK(detail::apportion(0, {1.0, 2.0}) == std::vector<int>{0, 0});
  CHECK(detail::apportion(7, {0.19, 0.15, 0.44}) == std::vector<int>{2, 1, 4});
  const auto r = detail::apportion(24, {1.0});
  CHECK(r == std::vector<int>{24});
}
