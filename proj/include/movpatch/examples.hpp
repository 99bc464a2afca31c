#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "movpatch/config.hpp"

namespace movpatch {

// The three built-in experiments: a heterogeneous sine wave steepening into
// one shock, a double sine wave with two pre-placed meso-patches, and a
// two-front exact-solution benchmark whose fast front overtakes the slow one.
inline std::array<RunConfig, 3> builtin_examples() {
  constexpr double pi = std::numbers::pi;
  std::array<RunConfig, 3> out;

  {
    RunConfig& c = out[0];
    c.a = -pi;
    c.b = pi;
    // micro spacing chosen so the full-domain grid (4000 intervals) is the
    // identical lattice; the patch and reference media then share one phase
    c.d = 2.0 * pi / 4000.0;
    c.het.kappa = 5;
    c.het.sampled = false;
    c.het.gam = {0.38, 1.36, 0.63, 3.97, 0.19};
    c.het.eps = {0.003, 0.033, 0.14, 0.018, 0.012};
    c.het.eps_target = 0.01;
    c.patches.count_ordinary = 26;
    c.patches.n_ordinary = 25;
    c.Gamma = 6;
    c.motion.tau = 10.0;
    c.motion.beta = 1.0;
    c.ic.name = "neg_sin";
    c.bc.name = "zero";
    c.t_end = 2.0;
    c.snapshot_dt = 0.05;
    c.full_points = 4001;
    c.out_dir = "out_example1";
  }

  {
    RunConfig& c = out[1];
    c.a = 0.0;
    c.b = 2.0 * pi;
    c.d = 2.0 * pi / 4000.0;
    c.het.kappa = 3;
    c.het.sampled = false;
    c.het.gam = {3.14, 0.37, 0.39};
    c.het.eps = {0.0054, 0.099, 0.0096};
    c.het.eps_target = 0.01;
    c.patches.count_ordinary = 28;
    c.patches.n_ordinary = 15;
    c.patches.meso = {{2.0, 150}, {4.0, 150}};
    c.Gamma = 6;
    c.motion.tau = 10.0;
    c.motion.beta = 1.0;
    c.ic.name = "double_sin";
    c.bc.name = "zero";
    c.t_end = 3.0;
    c.snapshot_dt = 0.05;
    c.full_points = 4001;
    c.out_dir = "out_example2";
  }

  {
    RunConfig& c = out[2];
    c.a = 0.0;
    c.b = 1.0;
    c.d = 1.0 / 3000.0;
    c.het.kappa = 3;
    c.het.sampled = false;
    c.het.gam = {1.0039, 0.9948, 1.0013};
    c.het.eps = {0.0013, 0.0005, 0.019};
    c.het.eps_target = 0.001;
    c.patches.count_ordinary = 7;
    c.patches.n_ordinary = 15;
    c.patches.meso = {{0.25, 150}, {0.5, 150}};
    c.Gamma = 1;
    c.motion.tau = 1.0;
    c.motion.beta = 0.01;
    c.ic.name = "burgers_three_wave";
    c.ic.params["eps"] = 0.001;
    c.bc.name = "burgers_three_wave";
    c.bc.params["eps"] = 0.001;
    c.t_end = 0.8;
    c.snapshot_dt = 0.02;
    c.full_points = 3001;
    c.out_dir = "out_example3";
  }

  for (const RunConfig& c : out) validate_config(c);
  return out;
}

inline RunConfig builtin_example(int index) {
  if (index < 1 || index > 3)
    throw std::invalid_argument("builtin_example: index must be 1, 2 or 3");
  return builtin_examples()[static_cast<std::size_t>(index - 1)];
}

}  // namespace movpatch
