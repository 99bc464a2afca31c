#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "movpatch/config.hpp"
#include "movpatch/integrate.hpp"
#include "movpatch/io.hpp"
#include "movpatch/metrics.hpp"

namespace movpatch {

inline constexpr const char* kVersion = "0.1.0";

inline FullTrajectory run_full_trajectory(const RunConfig& cfg) {
  validate_config(cfg);
  const HeterogeneityProfile profile = make_profile(cfg.het);
  FullDomainState state =
      make_full_domain(cfg.a, cfg.b, cfg.full_points, profile, make_bc(cfg), make_ic(cfg));
  FullTrajectory traj;
  traj.x = state.segment.x;
  run_full_domain(state, cfg.t_end, snapshot_schedule(cfg), cfg.integrator,
                  [&](double t, const MicroSegment& seg) {
                    traj.frames.push_back({t, seg.u});
                  });
  return traj;
}

struct PatchRun {
  PatchTrajectory traj;
  std::vector<MergeEvent> merges;
};

inline PatchRun run_patches_trajectory(const RunConfig& cfg) {
  validate_config(cfg);
  const HeterogeneityProfile profile = make_profile(cfg.het);
  PatchSystem sys = build_system(make_layout(cfg), profile, make_bc(cfg), make_ic(cfg));
  PatchRun run;
  const IntegrateResult res = integrate_patches(
      sys, cfg.t_end, snapshot_schedule(cfg), cfg.integrator, cfg.motion,
      [&](double t, const PatchSystem& s) { run.traj.frames.push_back({t, s.patches}); });
  run.merges = res.merges;
  return run;
}

inline void write_manifest(const RunConfig& cfg, const std::filesystem::path& dir) {
  json j;
  j["version"] = kVersion;
  j["config"] = cfg;
  if (cfg.het.sampled) j["seed"] = cfg.het.seed;
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << j.dump(2) << "\n";
}

inline void write_full_csv(const FullTrajectory& traj, const std::filesystem::path& path) {
  auto out = open_csv(path.string(), "t,patch,kind,x,u");
  for (const FullFrame& f : traj.frames) write_full_frame(out, f.t, traj.x, f.u);
}

inline void write_patches_csv(const PatchTrajectory& traj, const std::filesystem::path& path) {
  auto out = open_csv(path.string(), "t,patch,kind,x,u");
  for (const PatchFrame& f : traj.frames) write_patch_frame(out, f.t, f.patches);
}

// Mode-dispatched run; writes all artifacts into cfg.out_dir.
inline void run_to_files(const RunConfig& cfg) {
  validate_config(cfg);
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  write_manifest(cfg, dir);

  if (cfg.mode == "full") {
    write_full_csv(run_full_trajectory(cfg), dir / "snapshots_full.csv");
    return;
  }
  if (cfg.mode == "patches") {
    const PatchRun run = run_patches_trajectory(cfg);
    write_patches_csv(run.traj, dir / "snapshots_patches.csv");
    write_merges_csv((dir / "merges.csv").string(), run.merges);
    return;
  }
  const FullTrajectory full = run_full_trajectory(cfg);
  const PatchRun run = run_patches_trajectory(cfg);
  write_full_csv(full, dir / "snapshots_full.csv");
  write_patches_csv(run.traj, dir / "snapshots_patches.csv");
  write_merges_csv((dir / "merges.csv").string(), run.merges);
  write_metrics_csv((dir / "metrics.csv").string(), compare(run.traj, full));
}

}  // namespace movpatch
