#pragma once

#include <atomic>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ife/error.hpp"
#include "ife/frontier.hpp"
#include "ife/graph.hpp"
#include "ife/memory.hpp"
#include "ife/parents.hpp"

namespace ife {

enum class ReturnMode { kLengths, kPaths };

/// 1-byte path length meaning "not reached".
inline constexpr std::uint8_t kUnreached = 255;
/// Deepest level representable with 1-byte lengths.
inline constexpr std::uint32_t kMaxDepth = 254;
inline constexpr std::size_t kLaneWidth = 64;

inline void check_depth(std::uint32_t iter) {
  if (iter > kMaxDepth) {
    throw DepthOverflowError("path length " + std::to_string(iter) + " exceeds the 1-byte limit of " +
                             std::to_string(kMaxDepth));
  }
}

/// Calls f(i) for every set bit i of word, lowest first.
template <class F>
inline void for_each_set_bit(std::uint64_t word, F&& f) {
  while (word != 0) {
    f(static_cast<unsigned>(std::countr_zero(word)));
    word &= word - 1;
  }
}

std::vector<unsigned> decode_set_bits(std::uint64_t word);

/// Single-source shortest path lengths.
class LengthState {
 public:
  LengthState(std::size_t num_nodes, MemoryBudget& budget);

  void init(NodeId source) {
    len_[source] = 0;
    visited_[source] = 1;
  }

  /// Assigns len[v] = iter the first time v is reached. Exactly-once under concurrency.
  bool edge_compute(NodeId v, std::uint32_t iter) {
    std::atomic_ref<std::uint8_t> seen(visited_[v]);
    if (seen.load(std::memory_order_relaxed) != 0) return false;
    check_depth(iter);
    if (seen.exchange(1, std::memory_order_relaxed) != 0) return false;
    std::atomic_ref<std::uint8_t>(len_[v]).store(static_cast<std::uint8_t>(iter), std::memory_order_relaxed);
    return true;
  }

  std::uint8_t length(NodeId v) const { return len_[v]; }
  bool visited(NodeId v) const { return visited_[v] != 0; }
  std::size_t num_nodes() const { return len_.size(); }

 private:
  BudgetedArray<std::uint8_t> len_;
  BudgetedArray<std::uint8_t> visited_;
};

/// Single-source all-shortest-paths: visited flags, 1-byte distances and parent chains.
class PathState {
 public:
  PathState(std::size_t num_nodes, std::size_t num_threads, MemoryBudget& budget);

  void init(NodeId source) {
    dist_[source] = 0;
    visited_[source] = 1;
  }

  /// Records (u, via) as a parent of v when v is unvisited or was first
  /// reached in this same iteration; returns whether v belongs in the next frontier.
  bool edge_compute(NodeId u, NodeId v, EdgeId via, std::uint32_t iter, std::size_t thread);

  std::uint8_t dist(NodeId v) const { return dist_[v]; }
  bool visited(NodeId v) const { return visited_[v] != 0; }
  const ParentStore& parents() const { return parents_; }
  ParentStore& parents() { return parents_; }
  std::size_t num_nodes() const { return dist_.size(); }

 private:
  BudgetedArray<std::uint8_t> visited_;
  BudgetedArray<std::uint8_t> dist_;
  ParentStore parents_;
};

/// Per-node 64-bit lane words of a multi-source morsel plus its per-lane
/// auxiliaries. Pre-allocates 24 bytes per node of bit arrays plus 64
/// (lengths) or 512 (paths) bytes per node.
class LaneState {
 public:
  LaneState(std::size_t num_nodes, std::span<const NodeId> sources, ReturnMode mode, std::size_t num_threads,
            MemoryBudget& budget, MorselSizes sizes = {});

  LaneState(const LaneState&) = delete;
  LaneState& operator=(const LaneState&) = delete;

  /// Multi-lane edge compute for u -> v at level `iter`.
  bool edge_compute(NodeId u, NodeId v, EdgeId via, std::uint32_t iter, std::size_t thread) {
    const std::uint64_t bits = frontier_[u];
    return mode_ == ReturnMode::kLengths ? edge_compute_lengths(bits, v, iter)
                                         : edge_compute_paths(bits, u, v, via, iter, thread);
  }

  /// Iteration boundary; single caller only.
  SwapOutcome swap_and_maybe_sparsify();

  std::optional<FrontierMorsel> grab_frontier_morsel() { return carver_.grab(); }
  bool finish_frontier_morsel() { return carver_.finish(); }
  bool exhausted() const { return carver_.exhausted(); }
  bool has_overlay() const { return carver_.sparse(); }

  /// Calls f(u) for every node active in at least one lane.
  template <class F>
  void for_each_active(const FrontierMorsel& fm, F&& f) const;

  std::uint64_t frontier_bits(NodeId v) const { return frontier_[v]; }
  std::uint64_t next_bits(NodeId v) const { return load_relaxed(next_[v]); }
  std::uint64_t visited_bits(NodeId v) const { return load_relaxed(visited_[v]); }
  /// Number of nodes active in some lane of the current frontier.
  std::size_t current_count() const { return current_count_; }

  std::size_t num_lanes() const { return sources_.size(); }
  std::span<const NodeId> sources() const { return sources_; }
  ReturnMode mode() const { return mode_; }
  std::size_t num_nodes() const { return num_nodes_; }

  bool reached(NodeId v, std::size_t lane) const;
  /// Lengths mode only.
  std::uint8_t length(NodeId v, std::size_t lane) const { return len_[v * kLaneWidth + lane]; }
  /// Paths mode only. Distance is the iteration tag of v's parent records.
  std::optional<std::uint32_t> dist(NodeId v, std::size_t lane) const;
  const ParentStore& parents() const { return *parents_; }

  /// Bytes of the arrays allocated up front for this morsel.
  std::size_t preallocated_bytes() const;

 private:
  static std::uint64_t load_relaxed(const std::uint64_t& word) {
    return std::atomic_ref<std::uint64_t>(const_cast<std::uint64_t&>(word)).load(std::memory_order_relaxed);
  }
  bool edge_compute_lengths(std::uint64_t bits, NodeId v, std::uint32_t iter);
  bool edge_compute_paths(std::uint64_t bits, NodeId u, NodeId v, EdgeId via, std::uint32_t iter,
                          std::size_t thread);

  std::size_t num_nodes_;
  std::vector<NodeId> sources_;
  ReturnMode mode_;
  BudgetedArray<std::uint64_t> frontier_;
  BudgetedArray<std::uint64_t> next_;
  BudgetedArray<std::uint64_t> visited_;
  BudgetedArray<std::uint8_t> len_;
  std::optional<ParentStore> parents_;
  std::atomic<std::size_t> next_count_{0};
  std::size_t current_count_ = 0;
  MorselCarver carver_;
};

template <class F>
void LaneState::for_each_active(const FrontierMorsel& fm, F&& f) const {
  if (fm.kind == FrontierMorsel::Kind::kSparse) {
    for (NodeId u : carver_.overlay().subspan(fm.begin, fm.end - fm.begin)) f(u);
    return;
  }
  for (NodeId u = fm.begin; u < fm.end; ++u) {
    if (frontier_[u] != 0) f(u);
  }
}

inline bool LaneState::edge_compute_lengths(std::uint64_t bits, NodeId v, std::uint32_t iter) {
  std::atomic_ref<std::uint64_t> seen(visited_[v]);
  std::uint64_t fresh = bits & ~seen.load(std::memory_order_relaxed);
  if (fresh == 0) return false;
  check_depth(iter);
  // fetch_or returns the prior word, so lanes claimed concurrently by another
  // thread drop out of `fresh` and each lane is assigned exactly once.
  fresh &= ~seen.fetch_or(fresh, std::memory_order_relaxed);
  if (fresh == 0) return false;
  if (std::atomic_ref<std::uint64_t>(next_[v]).fetch_or(fresh, std::memory_order_relaxed) == 0) {
    next_count_.fetch_add(1, std::memory_order_relaxed);
  }
  std::uint8_t* lens = len_.data() + v * kLaneWidth;
  for_each_set_bit(fresh, [&](unsigned lane) {
    std::atomic_ref<std::uint8_t>(lens[lane]).store(static_cast<std::uint8_t>(iter), std::memory_order_relaxed);
  });
  return true;
}

inline bool LaneState::edge_compute_paths(std::uint64_t bits, NodeId u, NodeId v, EdgeId via, std::uint32_t iter,
                                          std::size_t thread) {
  // visited is folded in at iteration boundaries, so it is stable here and
  // every same-level parent of v is recorded.
  const std::uint64_t fresh = bits & ~visited_[v];
  if (fresh == 0) return false;
  check_depth(iter);
  if (std::atomic_ref<std::uint64_t>(next_[v]).fetch_or(fresh, std::memory_order_relaxed) == 0) {
    next_count_.fetch_add(1, std::memory_order_relaxed);
  }
  for_each_set_bit(fresh, [&](unsigned lane) { parents_->add_parent_edge(v, u, via, iter, thread, lane); });
  return true;
}

}  // namespace ife
