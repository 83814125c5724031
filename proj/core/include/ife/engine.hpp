#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ife/algorithms.hpp"
#include "ife/dispatcher.hpp"
#include "ife/graph.hpp"
#include "ife/memory.hpp"
#include "ife/parents.hpp"
#include "ife/results.hpp"

namespace ife {

struct QuerySpec {
  const CsrGraph* graph = nullptr;
  std::vector<NodeId> sources;
  /// One byte per node; empty means every node is a destination.
  std::vector<std::uint8_t> destinations;
  ReturnMode return_mode = ReturnMode::kLengths;
  DispatchPolicy policy;
  std::size_t num_threads = 1;
  MorselSizes frontier_morsels;
  std::size_t output_morsel = SourceMorsel::kDefaultOutputChunk;
  std::optional<std::size_t> max_paths_per_pair;
  /// Query-wide cap on pre-allocated arrays and parent arenas.
  std::optional<std::size_t> memory_limit_bytes;
};

/// Throws InvalidArgument describing the first problem found.
void validate(const QuerySpec& spec);

struct QueryStats {
  std::uint64_t wall_nanos = 0;
  std::vector<std::uint64_t> busy_nanos;  // per worker
  std::size_t morsels_launched = 0;
  std::size_t peak_live_morsels = 0;
  std::size_t peak_memory_bytes = 0;
  std::vector<MorselSummary> morsels;  // ordered by morsel id

  /// Sum of worker busy time over num_threads * wall time.
  double utilization() const;
  /// Frontier sizes and times summed across morsels, indexed by level.
  std::vector<LevelStat> merged_levels() const;
};

struct QueryResult {
  std::vector<LengthRow> lengths;  // sorted by (source, destination)
  std::vector<PathRow> paths;      // sorted by (source, destination, path)
  QueryStats stats;
};

/// Runs the IFE operator: num_threads workers pull source, frontier and
/// output morsels from a dispatcher until every source is done. Any worker
/// error aborts the whole query and is rethrown here.
QueryResult run_query(const QuerySpec& spec);

/// Creates the morsel type matching the spec's policy and return mode. All
/// morsels draw memory from `budget`, which must outlive them.
MorselFactory make_morsel_factory(const QuerySpec& spec, MemoryBudget& budget);

/// Calls f(path) for up to `cap` distinct shortest paths ending at `dst`,
/// walking parents backward in ascending (parent, edge) order. `parents(v)`
/// returns the valid parents of v, `dst_level` is dst's distance.
using ParentsFn = std::function<std::vector<ParentEdge>(NodeId)>;
void enumerate_shortest_paths(NodeId src, NodeId dst, std::uint32_t dst_level, const ParentsFn& parents,
                              std::optional<std::size_t> cap,
                              const std::function<void(std::vector<std::uint64_t>&&)>& emit);

inline constexpr std::uint32_t kNoDistance = ~std::uint32_t{0};

/// Ground truth for one source: distances and every level-respecting parent.
struct SerialIfeResult {
  std::vector<std::uint32_t> dist;                 // kNoDistance when unreached
  std::vector<std::vector<ParentEdge>> parents;    // sorted
  std::vector<std::size_t> level_sizes;
};

/// Single-threaded textbook IFE loop over one source.
SerialIfeResult serial_ife_oracle(const CsrGraph& g, NodeId src);

}  // namespace ife
