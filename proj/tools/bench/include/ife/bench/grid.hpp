#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ife/engine.hpp"
#include "ife/graph.hpp"

namespace ife::bench {

struct Dataset {
  std::string name;
  const CsrGraph* graph = nullptr;
};

struct Workload {
  std::vector<NodeId> sources;
};

struct GridConfig {
  std::vector<Dataset> datasets;
  /// One workload per dataset, or a single workload shared by all of them.
  std::vector<std::vector<Workload>> workloads;
  std::vector<DispatchPolicy> policies;
  std::vector<std::size_t> threads{1};
  std::vector<ReturnMode> return_modes{ReturnMode::kLengths};
  std::vector<std::uint8_t> destinations;
  std::optional<std::size_t> max_paths_per_pair;
  MorselSizes frontier_morsels;
  std::size_t output_morsel = SourceMorsel::kDefaultOutputChunk;
  std::optional<std::size_t> memory_limit_bytes;
  std::size_t repetitions = 3;
  std::size_t warmup = 1;
  bool verify = false;
};

enum class RowType { kWarmup, kRun, kMean };

struct BenchRow {
  std::string dataset;
  std::string policy;
  std::size_t k = 0;
  std::size_t threads = 0;
  ReturnMode return_mode = ReturnMode::kLengths;
  std::size_t num_sources = 0;
  RowType type = RowType::kRun;
  std::size_t run = 0;
  std::string status = "ok";
  double wall_ms = 0;
  double utilization = 0;
  double deviation = 0;  // mean rows only
  std::vector<std::size_t> level_sizes;
  std::vector<double> level_ms;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  bool any_failed() const;
  std::vector<const BenchRow*> means() const;
};

/// Runs warmup + repetitions per cell. Cell errors become the row status and
/// the grid continues.
BenchReport run_grid(const GridConfig& config);

/// "ok", or a failure description when the result disagrees with the oracle.
std::string verify_result(const QuerySpec& spec, const QueryResult& result);

/// Mean row for a cell's measured rows (warmups excluded).
BenchRow aggregate(const std::vector<BenchRow>& runs);

std::string_view to_string(RowType type);
std::string_view to_string(ReturnMode mode);

/// RFC 4180 CSV with a header row; wall time and per-level times in whole milliseconds.
void write_csv(const BenchReport& report, std::ostream& out);

}  // namespace ife::bench
