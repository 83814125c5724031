#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <iterator>
#include <span>
#include <utility>
#include <vector>

namespace ife {

/// Dense 0-based node identifier.
using NodeId = std::uint64_t;
/// Position of an edge in the CSR neighbor array.
using EdgeId = std::uint64_t;

/// Largest node count accepted by the loaders. Parent records pack the
/// iteration tag into the upper 16 bits of a node id, so ids must stay below 2^48.
inline constexpr std::uint64_t kMaxNodeIdBits = 48;
inline constexpr std::uint64_t kDefaultMaxNodes = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kDefaultMaxEdges = std::uint64_t{1} << 32;

struct Neighbor {
  NodeId node;
  EdgeId edge;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Forward range over (neighbor, edge id) pairs of a single node.
class NeighborRange {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Neighbor;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Neighbor;

    iterator() = default;
    iterator(const NodeId* base, EdgeId pos) : base_(base), pos_(pos) {}

    Neighbor operator*() const { return {base_[pos_], pos_}; }
    iterator& operator++() {
      ++pos_;
      return *this;
    }
    iterator operator++(int) {
      iterator tmp = *this;
      ++pos_;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.pos_ == b.pos_; }

   private:
    const NodeId* base_ = nullptr;
    EdgeId pos_ = 0;
  };

  NeighborRange(const NodeId* base, EdgeId begin, EdgeId end) : base_(base), begin_(begin), end_(end) {}

  iterator begin() const { return {base_, begin_}; }
  iterator end() const { return {base_, end_}; }
  std::size_t size() const { return static_cast<std::size_t>(end_ - begin_); }
  bool empty() const { return begin_ == end_; }

 private:
  const NodeId* base_;
  EdgeId begin_;
  EdgeId end_;
};

/// Immutable compressed-sparse-row adjacency store.
///
/// Safe for unsynchronized concurrent reads once constructed.
class CsrGraph {
 public:
  CsrGraph() : offsets_{0} {}

  /// Takes ownership of prebuilt CSR arrays. Throws InvalidArgument if the
  /// arrays violate the CSR invariants.
  CsrGraph(std::vector<EdgeId> offsets, std::vector<NodeId> neighbors, bool directed);

  std::size_t num_nodes() const { return offsets_.size() - 1; }
  std::size_t num_edges() const { return neighbors_.size(); }
  bool directed() const { return directed_; }

  std::size_t degree(NodeId u) const { return static_cast<std::size_t>(offsets_[u + 1] - offsets_[u]); }

  NeighborRange scan_fwd(NodeId u) const { return {neighbors_.data(), offsets_[u], offsets_[u + 1]}; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return std::span<const NodeId>(neighbors_).subspan(offsets_[u], degree(u));
  }

  std::span<const EdgeId> offsets() const { return offsets_; }
  std::span<const NodeId> neighbor_array() const { return neighbors_; }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;

 private:
  std::vector<EdgeId> offsets_;
  std::vector<NodeId> neighbors_;
  bool directed_ = true;
};

struct LoadOptions {
  bool directed = true;
  /// Node ids must be < max_nodes.
  std::uint64_t max_nodes = kDefaultMaxNodes;
};

/// Parses `u v` lines (`#` starts a comment line). Undirected input stores
/// both directions; duplicates and self-loops are kept. Neighbor lists are
/// sorted ascending.
CsrGraph load_edge_list(std::istream& in, const LoadOptions& options = {});

/// Builds a graph from an in-memory edge list with the same rules as load_edge_list.
CsrGraph build_graph(std::size_t num_nodes, std::span<const std::pair<NodeId, NodeId>> edges, bool directed);

/// Writes every stored edge as a `u v` line. For undirected graphs this
/// writes both directions, so reload with directed=true to get identical arrays.
void write_edge_list(std::ostream& out, const CsrGraph& g);

/// Binary snapshot: "IFE1", u64 num_nodes, u64 num_edges, offsets, neighbors;
/// all integers little-endian u64. The directed flag is not persisted.
void write_snapshot(std::ostream& out, const CsrGraph& g);
CsrGraph read_snapshot(std::istream& in, bool directed = true);

/// Directed G(n, m) graph with round(num_nodes * avg_degree) edges drawn
/// uniformly with replacement from all ordered pairs. Pure function of its arguments.
CsrGraph generate_random_graph(std::size_t num_nodes, double avg_degree, std::uint64_t seed,
                               std::uint64_t max_edges = kDefaultMaxEdges);

}  // namespace ife
