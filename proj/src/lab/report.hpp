#pragma once

#include <string>
#include <vector>

#include "analysis/monitors.hpp"
#include "analysis/probes.hpp"
#include "harness/limit.hpp"
#include "harness/run.hpp"

namespace bpl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitScientific = 2;
inline constexpr int kExitBlowup = 3;

// What a subcommand produced. Any pointer may be null; missing inputs yield
// header-only files.
struct ReportInputs {
  const MonitorSeries* monitors = nullptr;
  const std::vector<ProbeRecord>* probes = nullptr;
  const Trajectory* trajectory = nullptr;  // norms, geometry, contours
  const std::vector<DiffRecord>* pair = nullptr;
  const SweepResult* sweep = nullptr;
  bool plots = true;
};

/// Writes monitors.csv, monitor_series.csv, probes.jsonl, rates.json and
/// sweep_summary.csv always, and norms.csv, geometry.csv, contour_*.csv,
/// pairs.csv, failure.json and plot_*.dat when the inputs carry the data.
/// Returns kExitScientific if any verdict failed or any monitor flag is set,
/// kExitOk otherwise. Creates `out_dir` if needed; throws Io on write errors.
int emit_report(const ReportInputs& in, const std::string& out_dir);

// Exit status implied by the inputs alone (no files written).
int report_status(const ReportInputs& in);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace bpl
