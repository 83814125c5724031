#include "ife/bench/inputs.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "ife/error.hpp"

namespace ife::bench {

namespace {

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw InvalidArgument(fmt::format("invalid {} '{}'", what, text));
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return in;
}

}  // namespace

RandomGraphSpec RandomGraphSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InvalidArgument(fmt::format("expected N:DEG:SEED, got '{}'", text));
  RandomGraphSpec spec;
  spec.num_nodes = parse_number<std::size_t>(parts[0], "node count");
  spec.avg_degree = parse_number<double>(parts[1], "average degree");
  spec.seed = parse_number<std::uint64_t>(parts[2], "seed");
  return spec;
}

std::string RandomGraphSpec::name() const { return fmt::format("random-{}-{:g}-{}", num_nodes, avg_degree, seed); }

CsrGraph make_random_graph(const RandomGraphSpec& spec, bool directed) {
  CsrGraph g = generate_random_graph(spec.num_nodes, spec.avg_degree, spec.seed);
  if (directed) return g;
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.num_edges());
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (const Neighbor nbr : g.scan_fwd(u)) edges.emplace_back(u, nbr.node);
  }
  return build_graph(g.num_nodes(), edges, false);
}

CsrGraph load_graph_file(const std::filesystem::path& path, bool directed) {
  std::ifstream in = open_input(path);
  char magic[4] = {};
  in.read(magic, sizeof magic);
  const bool snapshot = in.gcount() == 4 && std::string_view(magic, 4) == "IFE1";
  in.clear();
  in.seekg(0);
  if (snapshot) return read_snapshot(in, directed);
  return load_edge_list(in, {.directed = directed});
}

std::vector<NodeId> read_node_list(std::istream& in, std::size_t num_nodes) {
  std::vector<NodeId> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || view[first] == '#') continue;
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      const auto id = parse_number<NodeId>(token, "node id");
      if (id >= num_nodes) throw InvalidArgument(fmt::format("node {} is not in the graph", id));
      out.push_back(id);
    }
  }
  return out;
}

std::vector<NodeId> read_node_list_file(const std::filesystem::path& path, std::size_t num_nodes) {
  std::ifstream in = open_input(path);
  return read_node_list(in, num_nodes);
}

std::vector<std::uint8_t> destination_mask(const std::vector<NodeId>& ids, std::size_t num_nodes) {
  std::vector<std::uint8_t> mask(num_nodes, 0);
  for (NodeId id : ids) mask.at(id) = 1;
  return mask;
}

std::vector<std::size_t> parse_count_list(std::string_view text) {
  std::vector<std::size_t> out;
  for (std::string_view part : split(text, ',')) {
    const auto value = parse_number<std::size_t>(part, "count");
    if (value == 0) throw InvalidArgument("counts must be positive");
    out.push_back(value);
  }
  return out;
}

}  // namespace ife::bench
