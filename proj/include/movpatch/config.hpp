#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "movpatch/exact.hpp"
#include "movpatch/geometry.hpp"
#include "movpatch/heterogeneity.hpp"
#include "movpatch/motion.hpp"
#include "movpatch/rk45.hpp"

namespace movpatch {

using nlohmann::json;

// Heterogeneity block: either an explicit coefficient table or log-normal
// sampling parameters. Explicit tables keep their gam values as given;
// eps is always rescaled to the target harmonic mean.
struct HeterogeneityConfig {
  int kappa = 1;
  bool sampled = false;
  double sigma_eps = 0.0;
  double sigma_gam = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::vector<double> gam;
  double eps_target = 1.0;
};

struct PatchLayoutConfig {
  int count_ordinary = 2;
  long n_ordinary = 1;
  std::vector<MesoSpec> meso;
  bool boundary_fixed = true;
};

// A function referenced by name plus numeric parameters.
struct NamedFunction {
  std::string name;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

struct RunConfig {
  double a = 0.0, b = 1.0;
  double d = 0.01;
  HeterogeneityConfig het;
  PatchLayoutConfig patches;
  int Gamma = 1;
  MotionParams motion;
  IntegratorConfig integrator;
  NamedFunction ic;
  NamedFunction bc;
  double t_end = 1.0;
  double snapshot_dt = 0.1;
  std::size_t full_points = 1000;
  std::string mode = "compare";
  std::string out_dir = "out";
};

inline void to_json(json& j, const HeterogeneityConfig& h) {
  j = json{{"kappa", h.kappa}, {"eps_target", h.eps_target}};
  if (h.sampled) {
    j["sigma_eps"] = h.sigma_eps;
    j["sigma_gam"] = h.sigma_gam;
    j["seed"] = h.seed;
  } else {
    j["eps"] = h.eps;
    j["gam"] = h.gam;
  }
}

inline void from_json(const json& j, HeterogeneityConfig& h) {
  h = HeterogeneityConfig{};
  h.kappa = j.at("kappa").get<int>();
  h.eps_target = j.at("eps_target").get<double>();
  h.sampled = !j.contains("eps");
  if (h.sampled) {
    h.sigma_eps = j.at("sigma_eps").get<double>();
    h.sigma_gam = j.at("sigma_gam").get<double>();
    h.seed = j.at("seed").get<std::uint64_t>();
  } else {
    h.eps = j.at("eps").get<std::vector<double>>();
    h.gam = j.at("gam").get<std::vector<double>>();
  }
}

inline void to_json(json& j, const MesoSpec& m) {
  j = json{{"center", m.center}, {"n", m.n}};
}
inline void from_json(const json& j, MesoSpec& m) {
  m.center = j.at("center").get<double>();
  m.n = j.at("n").get<long>();
}

inline void to_json(json& j, const PatchLayoutConfig& p) {
  j = json{{"count_ordinary", p.count_ordinary},
           {"n_ordinary", p.n_ordinary},
           {"meso", p.meso},
           {"boundary_fixed", p.boundary_fixed}};
}
inline void from_json(const json& j, PatchLayoutConfig& p) {
  p = PatchLayoutConfig{};
  p.count_ordinary = j.at("count_ordinary").get<int>();
  p.n_ordinary = j.at("n_ordinary").get<long>();
  if (j.contains("meso")) p.meso = j.at("meso").get<std::vector<MesoSpec>>();
  if (j.contains("boundary_fixed")) p.boundary_fixed = j.at("boundary_fixed").get<bool>();
}

inline void to_json(json& j, const NamedFunction& f) {
  j = json{{"name", f.name}};
  if (!f.params.empty()) j["params"] = f.params;
}
inline void from_json(const json& j, NamedFunction& f) {
  f = NamedFunction{};
  f.name = j.at("name").get<std::string>();
  if (j.contains("params")) f.params = j.at("params").get<std::map<std::string, double>>();
}

inline void to_json(json& j, const RunConfig& c) {
  j = json{{"domain", {c.a, c.b}},
           {"d", c.d},
           {"heterogeneity", c.het},
           {"patches", c.patches},
           {"gamma", c.Gamma},
           {"motion",
            {{"tau", c.motion.tau}, {"beta", c.motion.beta}, {"enabled", c.motion.enabled}}},
           {"integrator",
            {{"rel_tol", c.integrator.rel_tol},
             {"abs_tol", c.integrator.abs_tol},
             {"dt_init", c.integrator.dt_init},
             {"dt_min", c.integrator.dt_min},
             {"dt_max", c.integrator.dt_max},
             {"max_steps", c.integrator.max_steps}}},
           {"ic", c.ic},
           {"bc", c.bc},
           {"t_end", c.t_end},
           {"snapshot_dt", c.snapshot_dt},
           {"full_points", c.full_points},
           {"mode", c.mode},
           {"out_dir", c.out_dir}};
}

inline void from_json(const json& j, RunConfig& c) {
  c = RunConfig{};
  const auto& dom = j.at("domain");
  c.a = dom.at(0).get<double>();
  c.b = dom.at(1).get<double>();
  c.d = j.at("d").get<double>();
  c.het = j.at("heterogeneity").get<HeterogeneityConfig>();
  c.patches = j.at("patches").get<PatchLayoutConfig>();
  c.Gamma = j.at("gamma").get<int>();
  if (j.contains("motion")) {
    const auto& m = j.at("motion");
    c.motion.tau = m.at("tau").get<double>();
    c.motion.beta = m.at("beta").get<double>();
    if (m.contains("enabled")) c.motion.enabled = m.at("enabled").get<bool>();
  }
  if (j.contains("integrator")) {
    const auto& i = j.at("integrator");
    if (i.contains("rel_tol")) c.integrator.rel_tol = i.at("rel_tol").get<double>();
    if (i.contains("abs_tol")) c.integrator.abs_tol = i.at("abs_tol").get<double>();
    if (i.contains("dt_init")) c.integrator.dt_init = i.at("dt_init").get<double>();
    if (i.contains("dt_min")) c.integrator.dt_min = i.at("dt_min").get<double>();
    if (i.contains("dt_max")) c.integrator.dt_max = i.at("dt_max").get<double>();
    if (i.contains("max_steps")) c.integrator.max_steps = i.at("max_steps").get<long>();
  }
  c.ic = j.at("ic").get<NamedFunction>();
  c.bc = j.at("bc").get<NamedFunction>();
  c.t_end = j.at("t_end").get<double>();
  c.snapshot_dt = j.at("snapshot_dt").get<double>();
  c.full_points = j.at("full_points").get<std::size_t>();
  if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
  if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
}

// Schema validation with messages that name the violated rule.
inline void validate_config(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(c.a < c.b)) fail("domain must satisfy a < b");
  if (!(c.d > 0.0)) fail("micro spacing d must be > 0");
  if (c.het.kappa < 1) fail("heterogeneity period kappa must be >= 1");
  if (!(c.het.eps_target > 0.0)) fail("eps_target must be > 0");
  if (!c.het.sampled) {
    if (static_cast<int>(c.het.eps.size()) != c.het.kappa ||
        static_cast<int>(c.het.gam.size()) != c.het.kappa)
      fail("explicit coefficient tables must have exactly kappa entries");
    for (double e : c.het.eps)
      if (!(e > 0.0)) fail("explicit eps table entries must be > 0");
  }
  if (c.patches.count_ordinary < 2) fail("need at least 2 ordinary patches");
  if (c.patches.n_ordinary < 1 || c.patches.n_ordinary % c.het.kappa != 0)
    fail("ordinary patch half-count n must be a positive multiple of kappa");
  for (const auto& m : c.patches.meso) {
    if (m.n < 1 || m.n % c.het.kappa != 0)
      fail("meso patch half-count n must be a positive multiple of kappa");
    if (!(c.a < m.center && m.center < c.b)) fail("meso centre must lie inside the domain");
  }
  if (c.Gamma < 1) fail("interpolation half-width Gamma must be >= 1");
  if (!(c.motion.tau > 0.0)) fail("motion tau must be > 0");
  if (!(c.motion.beta > 0.0)) fail("motion beta must be > 0");
  c.integrator.validate();
  if (!(c.t_end > 0.0)) fail("t_end must be > 0");
  if (!(c.snapshot_dt > 0.0)) fail("snapshot_dt must be > 0");
  if (c.full_points < 3) fail("full_points must be >= 3");
  if (c.mode != "full" && c.mode != "patches" && c.mode != "compare")
    fail("mode must be one of full | patches | compare");
  static const char* ic_names[] = {"zero", "sin", "neg_sin", "double_sin",
                                   "burgers_three_wave"};
  static const char* bc_names[] = {"zero", "burgers_three_wave"};
  auto known = [](const std::string& n, auto& list) {
    for (const char* k : list)
      if (n == k) return true;
    return false;
  };
  if (!known(c.ic.name, ic_names)) fail("unknown initial condition name: " + c.ic.name);
  if (!known(c.bc.name, bc_names)) fail("unknown boundary condition name: " + c.bc.name);
}

inline HeterogeneityProfile make_profile(const HeterogeneityConfig& h) {
  if (h.sampled) {
    return normalize(sample_profile(h.kappa, h.sigma_eps, h.sigma_gam, h.seed), h.eps_target);
  }
  HeterogeneityProfile p;
  p.kappa = h.kappa;
  p.eps = h.eps;
  p.gam = h.gam;
  return normalize_eps(std::move(p), h.eps_target);
}

inline std::function<double(double)> make_ic(const RunConfig& c) {
  const NamedFunction& f = c.ic;
  if (f.name == "zero") return [](double) { return 0.0; };
  if (f.name == "sin") return [](double x) { return std::sin(x); };
  if (f.name == "neg_sin") return [](double x) { return -std::sin(x); };
  if (f.name == "double_sin")
    return [](double x) { return std::sin(2.0 * x) + 0.5 * std::sin(x); };
  if (f.name == "burgers_three_wave") {
    const double eps = f.param("eps", 0.001);
    return [eps](double x) { return exact_burgers_three_wave(x, 0.0, eps); };
  }
  throw std::invalid_argument("unknown initial condition name: " + f.name);
}

inline BoundaryCondition make_bc(const RunConfig& c) {
  const NamedFunction& f = c.bc;
  if (f.name == "zero") {
    auto z = [](double) { return 0.0; };
    return {z, z};
  }
  if (f.name == "burgers_three_wave") {
    const double eps = f.param("eps", 0.001);
    const double a = c.a, b = c.b;
    return {[a, eps](double t) { return exact_burgers_three_wave(a, t, eps); },
            [b, eps](double t) { return exact_burgers_three_wave(b, t, eps); }};
  }
  throw std::invalid_argument("unknown boundary condition name: " + f.name);
}

inline SystemLayout make_layout(const RunConfig& c) {
  SystemLayout lay;
  lay.a = c.a;
  lay.b = c.b;
  lay.d = c.d;
  lay.count_ordinary = c.patches.count_ordinary;
  lay.n_ordinary = c.patches.n_ordinary;
  lay.meso = c.patches.meso;
  lay.Gamma = c.Gamma;
  lay.boundary_patches_fixed = c.patches.boundary_fixed;
  return lay;
}

inline std::vector<double> snapshot_schedule(const RunConfig& c) {
  std::vector<double> out;
  const long m = static_cast<long>(std::floor(c.t_end / c.snapshot_dt + 1e-9));
  out.reserve(static_cast<std::size_t>(m) + 2);
  for (long k = 0; k <= m; ++k) out.push_back(static_cast<double>(k) * c.snapshot_dt);
  if (out.back() < c.t_end - 1e-12 * std::max(1.0, c.t_end)) out.push_back(c.t_end);
  else out.back() = c.t_end;
  return out;
}

}  // namespace movpatch
