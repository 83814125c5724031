#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ife/graph.hpp"

namespace ife::bench {

struct RandomGraphSpec {
  std::size_t num_nodes = 0;
  double avg_degree = 0;
  std::uint64_t seed = 0;

  /// Parses "N:DEG:SEED".
  static RandomGraphSpec parse(std::string_view text);
  std::string name() const;
};

/// Random graph; the undirected variant stores every drawn edge both ways.
CsrGraph make_random_graph(const RandomGraphSpec& spec, bool directed);

/// Reads an edge list, or a binary snapshot when the file starts with the snapshot magic.
CsrGraph load_graph_file(const std::filesystem::path& path, bool directed);

/// Whitespace-separated node ids; `#` starts a comment line. Ids must be < num_nodes.
std::vector<NodeId> read_node_list(std::istream& in, std::size_t num_nodes);
std::vector<NodeId> read_node_list_file(const std::filesystem::path& path, std::size_t num_nodes);

/// One byte per node, set for each listed id.
std::vector<std::uint8_t> destination_mask(const std::vector<NodeId>& ids, std::size_t num_nodes);

/// Parses "1,2,4" into positive integers.
std::vector<std::size_t> parse_count_list(std::string_view text);

}  // namespace ife::bench
