#pragma once

// Brute-force references used by tests and `--verify`. They read graphs
// through an adjacency map, never through CSR internals.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ife/engine.hpp"
#include "ife/graph.hpp"

namespace ife::oracle {

/// Node -> outgoing (neighbor, edge id) list.
struct AdjacencyMap {
  std::size_t num_nodes = 0;
  std::map<NodeId, std::vector<Neighbor>> out;

  /// Copies adjacency through CsrGraph::scan_fwd only.
  static AdjacencyMap from_graph(const CsrGraph& g);
};

/// Naive loader: node -> multiset of neighbors, built directly from edge-list text.
std::map<NodeId, std::multiset<NodeId>> load_neighbor_multisets(std::istream& in, bool directed);

/// Queue-based BFS distances; nullopt for unreachable nodes.
std::vector<std::optional<std::uint32_t>> bfs_distances(const AdjacencyMap& adj, NodeId src);

using Path = std::vector<std::uint64_t>;  // src, edge, node, ..., dst

inline constexpr std::size_t kExhaustiveLimit = 64;

/// Every shortest path from src to dst by exhaustive level-respecting DFS.
/// Refuses graphs with more than 64 nodes.
std::set<Path> brute_force_all_shortest_paths(const CsrGraph& g, NodeId src, NodeId dst);

struct ReferenceResult {
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> distances;        // (src, dst) -> length
  std::map<std::pair<NodeId, NodeId>, std::set<Path>> shortest_paths;  // small graphs only
};

/// Distances for every source (and all shortest paths when the graph has <= 64 nodes).
ReferenceResult reference_result(const CsrGraph& g, std::span<const NodeId> sources, bool with_paths);

/// Sorted length rows the engine must produce for `sources`, optionally restricted by a destination mask.
std::vector<LengthRow> expected_length_rows(const CsrGraph& g, std::span<const NodeId> sources,
                                            std::span<const std::uint8_t> destinations = {});

enum class TraceAction {
  kLaunch,        // worker received a freshly launched morsel
  kJoin,          // worker received an existing morsel
  kFrontierMorsel,
  kOutputMorsel,
  kIdle,          // the morsel had no work at that instant
  kAdvance,       // worker finished an iteration
  kEnterOutput,   // worker moved the morsel to OUTPUT
  kRetire,
  kExit,
};

std::string_view to_string(TraceAction action);

struct TraceEvent {
  std::size_t worker;
  std::uint64_t morsel;  // ~0 for kExit
  TraceAction action;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct DispatchTrace {
  std::vector<TraceEvent> events;
  std::size_t morsels_launched = 0;
  std::size_t peak_live = 0;
  QueryResult result;  // rows produced during the replay
};

/// Replays the operator loop with spec.num_threads simulated workers that
/// take turns one step at a time on the calling thread. A step is either
/// "obtain a morsel and grab a work item" or "complete the held work item".
DispatchTrace replay_policy_single_threaded(const QuerySpec& spec, std::size_t max_steps = 10'000'000);

}  // namespace ife::oracle
