#include "ife/graph.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "ife/error.hpp"
#include "ife/rng.hpp"

namespace ife {

CsrGraph::CsrGraph(std::vector<EdgeId> offsets, std::vector<NodeId> neighbors, bool directed)
    : offsets_(std::move(offsets)), neighbors_(std::move(neighbors)), directed_(directed) {
  if (offsets_.empty() || offsets_.front() != 0) {
    throw InvalidArgument("CSR offsets must start with 0");
  }
  if (offsets_.back() != neighbors_.size()) {
    throw InvalidArgument("CSR offsets must end with num_edges");
  }
  if (!std::is_sorted(offsets_.begin(), offsets_.end())) {
    throw InvalidArgument("CSR offsets must be non-decreasing");
  }
  const std::size_t n = offsets_.size() - 1;
  for (NodeId v : neighbors_) {
    if (v >= n) throw InvalidArgument("CSR neighbor id out of range");
  }
}

CsrGraph build_graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges, bool directed) {
  std::vector<EdgeId> offsets(num_nodes + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) throw InvalidArgument("edge endpoint out of range");
    ++offsets[u + 1];
    if (!directed) ++offsets[v + 1];
  }
  for (std::size_t i = 0; i < num_nodes; ++i) offsets[i + 1] += offsets[i];

  std::vector<NodeId> neighbors(offsets.back());
  std::vector<EdgeId> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    neighbors[fill[u]++] = v;
    if (!directed) neighbors[fill[v]++] = u;
  }
  for (std::size_t u = 0; u < num_nodes; ++u) {
    std::sort(neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[u]),
              neighbors.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]));
  }
  return CsrGraph(std::move(offsets), std::move(neighbors), directed);
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  std::size_t j = i;
  while (j < rest.size() && !is_space(rest[j])) ++j;
  std::string_view tok = rest.substr(i, j - i);
  rest.remove_prefix(j);
  return tok;
}

NodeId parse_id(std::string_view tok, std::size_t line, const LoadOptions& options) {
  if (tok.empty()) throw ParseError("expected two node ids", line);
  NodeId value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw CapacityError("line " + std::to_string(line) + ": node id exceeds capacity");
  }
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("malformed node id '" + std::string(tok) + "'", line);
  }
  if (value >= options.max_nodes) {
    throw CapacityError("line " + std::to_string(line) + ": node id " + std::to_string(value) +
                        " exceeds cap of " + std::to_string(options.max_nodes) + " nodes");
  }
  return value;
}

}  // namespace

CsrGraph load_edge_list(std::istream& in, const LoadOptions& options) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t num_nodes = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    std::string_view first = next_token(rest);
    if (first.empty() || first.front() == '#') continue;
    NodeId u = parse_id(first, line_no, options);
    NodeId v = parse_id(next_token(rest), line_no, options);
    if (!next_token(rest).empty()) throw ParseError("trailing tokens after edge", line_no);
    edges.emplace_back(u, v);
    num_nodes = std::max<std::size_t>(num_nodes, std::max(u, v) + 1);
  }
  return build_graph(num_nodes, edges, options.directed);
}

void write_edge_list(std::ostream& out, const CsrGraph& g) {
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) out << u << ' ' << v << '\n';
  }
}

namespace {

constexpr std::array<char, 4> kSnapshotMagic = {'I', 'F', 'E', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw ParseError("truncated snapshot", 0);
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const CsrGraph& g) {
  out.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  put_u64(out, g.num_nodes());
  put_u64(out, g.num_edges());
  for (EdgeId off : g.offsets()) put_u64(out, off);
  for (NodeId v : g.neighbor_array()) put_u64(out, v);
}

CsrGraph read_snapshot(std::istream& in, bool directed) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kSnapshotMagic) {
    throw ParseError("not an IFE1 snapshot", 0);
  }
  const std::uint64_t n = get_u64(in);
  const std::uint64_t m = get_u64(in);
  if (n >= kDefaultMaxNodes || m >= kDefaultMaxEdges) throw CapacityError("snapshot exceeds capacity");
  std::vector<EdgeId> offsets(n + 1);
  for (auto& off : offsets) off = get_u64(in);
  std::vector<NodeId> neighbors(m);
  for (auto& v : neighbors) v = get_u64(in);
  try {
    return CsrGraph(std::move(offsets), std::move(neighbors), directed);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("corrupt snapshot: ") + e.what(), 0);
  }
}

CsrGraph generate_random_graph(std::size_t num_nodes, double avg_degree, std::uint64_t seed,
                               std::uint64_t max_edges) {
  if (num_nodes < 1) throw InvalidArgument("random graph needs at least one node");
  if (!(avg_degree >= 0.0) || !std::isfinite(avg_degree)) {
    throw InvalidArgument("average degree must be a finite value >= 0");
  }
  const double wanted = std::round(static_cast<double>(num_nodes) * avg_degree);
  if (wanted > static_cast<double>(max_edges)) {
    throw CapacityError("random graph would need " + std::to_string(wanted) + " edges, cap is " +
                        std::to_string(max_edges));
  }
  const auto num_edges = static_cast<std::uint64_t>(wanted);
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges(num_edges);
  for (auto& [u, v] : edges) {
    u = rng.below(num_nodes);
    v = rng.below(num_nodes);
  }
  return build_graph(num_nodes, edges, /*directed=*/true);
}

}  // namespace ife
