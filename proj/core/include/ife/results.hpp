#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ife/graph.hpp"

namespace ife {

struct LengthRow {
  NodeId source;
  NodeId destination;
  std::uint32_t length;

  friend auto operator<=>(const LengthRow&, const LengthRow&) = default;
};

/// A path is stored as source, edge, node, edge, ..., destination.
struct PathRow {
  NodeId source;
  NodeId destination;
  std::vector<std::uint64_t> path;

  std::size_t length() const { return path.size() / 2; }
  friend auto operator<=>(const PathRow&, const PathRow&) = default;
};

/// Per-worker result buffer.
struct RowSink {
  std::vector<LengthRow> lengths;
  std::vector<PathRow> paths;
};

/// Output-phase parameters shared by all morsels of a query.
struct OutputOptions {
  /// One byte per node; null means every node is a destination.
  const std::vector<std::uint8_t>* destinations = nullptr;
  std::optional<std::size_t> max_paths_per_pair;

  bool wants(NodeId d) const { return destinations == nullptr || (*destinations)[d] != 0; }
};

}  // namespace ife
