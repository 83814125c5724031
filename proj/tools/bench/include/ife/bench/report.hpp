#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ife/bench/grid.hpp"
#include "ife/dispatcher.hpp"

namespace ife::bench {

class ReportError : public Error {
 public:
  using Error::Error;
};

/// Per-level stats of one single-source lengths run at a given thread count.
struct LevelRun {
  std::size_t threads = 1;
  std::vector<LevelStat> levels;
};

/// Per-level breakdown: frontier size and elapsed ms for each thread count,
/// then a total row. Frontier sizes are taken from the first run.
std::string emit_level_table(std::span<const LevelRun> runs);

/// LevelRuns rebuilt from the mean rows of a report for one dataset/policy/k.
std::vector<LevelRun> level_runs_from_report(const BenchReport& report, const BenchRow& like);

struct SpeedupPoint {
  std::size_t threads = 0;
  double speedup = 0;
};

struct SpeedupSeries {
  std::string label;
  std::vector<SpeedupPoint> points;  // ascending threads
};

/// One series per policy (and per dataset/workload/mode when the report has
/// several), relative to the series' 1-thread mean or its smallest thread count.
std::vector<SpeedupSeries> speedup_series(const BenchReport& report);

/// Deterministic SVG line chart. Throws ReportError when there is nothing to plot.
std::string render_speedup_svg(const BenchReport& report);

/// Writes render_speedup_svg() to `path`; throws Error on write failure.
void emit_speedup_chart(const BenchReport& report, const std::filesystem::path& path);

}  // namespace ife::bench
