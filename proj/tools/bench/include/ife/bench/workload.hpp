#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ife/error.hpp"
#include "ife/graph.hpp"

namespace ife::bench {

class WorkloadError : public Error {
 public:
  using Error::Error;
};

struct WorkloadSpec {
  std::size_t num_sources = 1;
  std::uint64_t seed = 42;
  std::uint32_t min_reach_depth = 3;
  std::size_t repetitions = 3;
  std::size_t warmup = 1;
};

/// True if some node lies at BFS distance >= depth from s.
bool reaches_depth(const CsrGraph& g, NodeId s, std::uint32_t depth);

/// Distinct sources drawn in seeded random order; candidates that cannot
/// reach `min_reach_depth` are skipped. Throws WorkloadError when the graph
/// has too few qualifying nodes.
std::vector<NodeId> generate_sources(const CsrGraph& g, const WorkloadSpec& spec);

}  // namespace ife::bench
