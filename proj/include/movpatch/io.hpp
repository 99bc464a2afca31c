#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "movpatch/geometry.hpp"
#include "movpatch/merging.hpp"
#include "movpatch/metrics.hpp"

namespace movpatch {

// 17 significant digits: enough to round-trip any double bit-exactly.
inline std::string fmt_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::ofstream open_csv(const std::string& path, const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << header << "\n";
  return out;
}

// Snapshot rows, schema t,patch,kind,x,u. Full-domain rows use patch=-1 and
// kind=full; patch rows list every micro point plus the macro-node rows.
inline void write_full_frame(std::ofstream& out, double t, const std::vector<double>& x,
                             const std::vector<double>& u) {
  const std::string ts = fmt_g17(t);
  for (std::size_t k = 0; k < x.size(); ++k)
    out << ts << ",-1,full," << fmt_g17(x[k]) << ',' << fmt_g17(u[k]) << "\n";
}

inline void write_patch_frame(std::ofstream& out, double t, const std::vector<Patch>& patches) {
  const std::string ts = fmt_g17(t);
  for (std::size_t j = 0; j < patches.size(); ++j) {
    const Patch& p = patches[j];
    for (long i = -p.n; i <= p.n; ++i)
      out << ts << ',' << j << ",micro," << fmt_g17(p.x(i)) << ',' << fmt_g17(p.at(i))
          << "\n";
    if (p.kind == PatchKind::ordinary) {
      out << ts << ',' << j << ",center," << fmt_g17(p.x(0)) << ',' << fmt_g17(p.at(0))
          << "\n";
    } else {
      out << ts << ',' << j << ",node_l," << fmt_g17(p.x(p.node_l)) << ','
          << fmt_g17(p.at(p.node_l)) << "\n";
      out << ts << ',' << j << ",node_r," << fmt_g17(p.x(p.node_r)) << ','
          << fmt_g17(p.at(p.node_r)) << "\n";
    }
  }
}

inline void write_merges_csv(const std::string& path, const std::vector<MergeEvent>& events) {
  auto out = open_csv(path, "t,x,s,n_left,n_right");
  for (const MergeEvent& e : events)
    out << fmt_g17(e.t) << ',' << fmt_g17(e.x) << ',' << e.s << ',' << e.n_left << ','
        << e.n_right << "\n";
}

inline void write_metrics_csv(const std::string& path, const MetricSeries& series) {
  auto out = open_csv(path, "t,macro_rmse,micro_rmse,l2_rel_err");
  for (const MetricRow& r : series)
    out << fmt_g17(r.t) << ',' << fmt_g17(r.macro_rmse) << ',' << fmt_g17(r.micro_rmse)
        << ',' << fmt_g17(r.l2_rel_err) << "\n";
}

}  // namespace movpatch
