#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ife/graph.hpp"

namespace ife {

/// Lock-free chunk dispenser for one iteration of work.
///
/// A single 64-bit word packs the number of workers holding a chunk, the
/// next chunk index and the chunk count, so "every chunk handed out and
/// every holder finished" is observed by exactly one release() call.
class WorkCounter {
 public:
  static constexpr std::uint64_t kMaxChunks = (std::uint64_t{1} << 24) - 1;
  static constexpr std::uint64_t kMaxInflight = (std::uint64_t{1} << 16) - 1;

  /// Starts a new round of `total` chunks. Callers must guarantee nobody holds a chunk.
  void reset(std::uint64_t total);

  /// Hands out the next chunk index and registers the caller as a holder.
  std::optional<std::uint64_t> acquire();

  /// Drops the caller's hold. True for exactly one caller per round: the
  /// last holder to finish once every chunk has been handed out.
  bool release();

  bool exhausted() const;
  std::uint64_t inflight() const;

 private:
  static constexpr int kCursorShift = 24;
  static constexpr int kInflightShift = 48;
  static constexpr std::uint64_t kFieldMask = kMaxChunks;

  std::atomic<std::uint64_t> word_{0};
};

struct MorselSizes {
  std::size_t dense = 2048;
  std::size_t sparse = 1024;
};

/// A unit of frontier work: a half-open range of node ids (dense) or of
/// overlay positions (sparse).
struct FrontierMorsel {
  enum class Kind { kDense, kSparse };
  Kind kind = Kind::kDense;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const FrontierMorsel&, const FrontierMorsel&) = default;
};

/// Carves the current frontier into morsels and builds the sparse overlay
/// when fewer than num_nodes/8 nodes are active.
class MorselCarver {
 public:
  MorselCarver(std::size_t num_nodes, MorselSizes sizes);

  /// Prepares dispatch for a new iteration. `is_active` is only consulted
  /// when the overlay is built. Returns true if the overlay was built.
  template <class IsActive>
  bool rebuild(std::size_t active_count, IsActive&& is_active);

  /// Marks the round as finished without work (converged frontier).
  void close() { counter_.reset(0); }

  std::optional<FrontierMorsel> grab();
  bool finish() { return counter_.release(); }
  bool exhausted() const { return counter_.exhausted(); }

  bool sparse() const { return sparse_; }
  std::span<const NodeId> overlay() const { return overlay_; }

  /// Strict-less sparse rule with integer division.
  static bool wants_overlay(std::size_t active_count, std::size_t num_nodes) {
    return active_count < num_nodes / 8;
  }

 private:
  void start_round(std::size_t domain, std::size_t morsel_size);

  std::size_t num_nodes_;
  MorselSizes sizes_;
  std::vector<NodeId> overlay_;
  bool sparse_ = false;
  std::size_t domain_ = 0;
  std::size_t chunk_ = 1;
  WorkCounter counter_;
};

template <class IsActive>
bool MorselCarver::rebuild(std::size_t active_count, IsActive&& is_active) {
  overlay_.clear();
  sparse_ = wants_overlay(active_count, num_nodes_);
  if (sparse_) {
    overlay_.reserve(active_count);
    for (NodeId v = 0; v < num_nodes_; ++v) {
      if (is_active(v)) overlay_.push_back(v);
    }
    start_round(overlay_.size(), sizes_.sparse);
  } else {
    start_round(num_nodes_, sizes_.dense);
  }
  return sparse_;
}

/// One boolean per node plus a count of set entries. The count is exact
/// whenever no set_active call is in flight.
class DenseFrontier {
 public:
  explicit DenseFrontier(std::size_t num_nodes) : active_(num_nodes, 0) {}

  DenseFrontier(const DenseFrontier&) = delete;
  DenseFrontier& operator=(const DenseFrontier&) = delete;
  DenseFrontier(DenseFrontier&& other) noexcept
      : active_(std::move(other.active_)), count_(other.count_.load(std::memory_order_relaxed)) {}

  /// True only for the call that flipped v from inactive to active.
  bool set_active(NodeId v) {
    std::atomic_ref<std::uint8_t> slot(active_[v]);
    if (slot.load(std::memory_order_relaxed) != 0) return false;
    if (slot.exchange(1, std::memory_order_relaxed) != 0) return false;
    count_.fetch_add(1, std::memory_order_relaxed);
    return true;
  }

  bool is_active(NodeId v) const {
    return std::atomic_ref<std::uint8_t>(active_[v]).load(std::memory_order_relaxed) != 0;
  }

  std::size_t count() const { return count_.load(std::memory_order_relaxed); }
  std::size_t size() const { return active_.size(); }

  void clear();
  /// Clears only the listed positions; they must cover every active entry.
  void clear(std::span<const NodeId> active_ids);

 private:
  // atomic_ref needs a non-const object; is_active only reads.
  mutable std::vector<std::uint8_t> active_;
  std::atomic<std::size_t> count_{0};
};

enum class SwapOutcome { kContinue, kConverged };

/// Current/next dense frontiers of one IFE subroutine.
class FrontierPair {
 public:
  explicit FrontierPair(std::size_t num_nodes, MorselSizes sizes = {});

  bool set_active(NodeId v) { return next().set_active(v); }
  bool is_active(NodeId v) const { return current().is_active(v); }

  std::size_t num_nodes() const { return frontiers_[0].size(); }
  std::size_t current_count() const { return current().count(); }
  std::size_t next_count() const { return next().count(); }

  /// Iteration boundary: exchanges current and next, clears the new next,
  /// and rebuilds morsel dispatch for the new current. Single caller only.
  SwapOutcome swap_and_maybe_sparsify();

  std::optional<FrontierMorsel> grab_frontier_morsel() { return carver_.grab(); }
  /// True for the single caller that finished the last morsel of the iteration.
  bool finish_frontier_morsel() { return carver_.finish(); }
  bool exhausted() const { return carver_.exhausted(); }

  bool has_overlay() const { return carver_.sparse(); }
  std::span<const NodeId> overlay() const { return carver_.overlay(); }

  /// Calls f(u) for every active node of the morsel.
  template <class F>
  void for_each_active(const FrontierMorsel& fm, F&& f) const;

 private:
  DenseFrontier& current() { return frontiers_[cur_]; }
  DenseFrontier& next() { return frontiers_[cur_ ^ 1]; }
  const DenseFrontier& current() const { return frontiers_[cur_]; }
  const DenseFrontier& next() const { return frontiers_[cur_ ^ 1]; }

  DenseFrontier frontiers_[2];
  int cur_ = 0;
  MorselCarver carver_;
};

template <class F>
void FrontierPair::for_each_active(const FrontierMorsel& fm, F&& f) const {
  if (fm.kind == FrontierMorsel::Kind::kSparse) {
    for (NodeId u : overlay().subspan(fm.begin, fm.end - fm.begin)) f(u);
    return;
  }
  const DenseFrontier& cur = current();
  for (NodeId u = fm.begin; u < fm.end; ++u) {
    if (cur.is_active(u)) f(u);
  }
}

}  // namespace ife
