#pragma once

#include <array>
#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ife/graph.hpp"
#include "ife/memory.hpp"

namespace ife {

/// One parent edge of a shortest path: 8 bytes of parent id (upper 16 bits
/// hold the iteration tag), 8 bytes edge id, 8 bytes handle of the next
/// record on the same child's chain.
struct ParentRecord {
  static constexpr std::uint64_t kParentMask = (std::uint64_t{1} << kMaxNodeIdBits) - 1;

  std::uint64_t parent_and_iter;
  EdgeId via_edge;
  std::uint64_t next;

  NodeId parent() const { return parent_and_iter & kParentMask; }
  std::uint32_t iter() const { return static_cast<std::uint32_t>(parent_and_iter >> kMaxNodeIdBits); }

  static std::uint64_t pack(NodeId parent, std::uint32_t iter) {
    return (static_cast<std::uint64_t>(iter) << kMaxNodeIdBits) | parent;
  }
};
static_assert(sizeof(ParentRecord) == 24);

/// (thread, record index) packed into 8 bytes; all-ones is null.
inline constexpr std::uint64_t kNullHandle = ~std::uint64_t{0};

struct ParentEdge {
  NodeId parent;
  EdgeId via_edge;

  friend auto operator<=>(const ParentEdge&, const ParentEdge&) = default;
};

/// Append-only record buffer written by a single thread. Blocks start at
/// 1 MiB and double; existing records never move.
class ParentArena {
 public:
  static constexpr std::size_t kFirstBlockRecords = (std::size_t{1} << 20) / sizeof(ParentRecord);
  static constexpr std::size_t kMaxBlocks = 40;

  explicit ParentArena(MemoryBudget& budget) : budget_(&budget) {}
  ParentArena(const ParentArena&) = delete;
  ParentArena& operator=(const ParentArena&) = delete;
  ~ParentArena();

  /// Returns the index of the new record.
  std::uint64_t append(const ParentRecord& rec);

  ParentRecord& at(std::uint64_t index) {
    auto [block, offset] = locate(index);
    return blocks_[block][offset];
  }
  const ParentRecord& at(std::uint64_t index) const {
    auto [block, offset] = locate(index);
    return blocks_[block][offset];
  }

  std::size_t size() const { return size_; }
  std::size_t reserved_bytes() const { return reserved_bytes_; }

 private:
  static std::pair<std::size_t, std::size_t> locate(std::uint64_t index);

  MemoryBudget* budget_;
  std::array<std::unique_ptr<ParentRecord[]>, kMaxBlocks> blocks_;
  std::size_t num_blocks_ = 0;
  std::size_t capacity_ = 0;
  std::size_t size_ = 0;
  std::size_t reserved_bytes_ = 0;
};

/// Shared per-node head handles plus per-thread arenas. Supports several
/// independent lanes (one per source of a multi-source morsel); lane heads
/// of a node are stored contiguously.
class ParentStore {
 public:
  ParentStore(std::size_t num_nodes, std::size_t num_threads, MemoryBudget& budget, std::size_t lanes = 1);

  /// Prepends (parent, via_edge, iter) to child's chain. Safe under full
  /// concurrency provided each thread id is used by one thread at a time.
  void add_parent_edge(NodeId child, NodeId parent, EdgeId via_edge, std::uint32_t iter, std::size_t thread,
                       std::size_t lane = 0);

  /// Deduplicated parents recorded at `at_iter`, sorted by (parent, edge).
  /// Requires quiescence.
  std::vector<ParentEdge> collect_parents(NodeId child, std::uint32_t at_iter, std::size_t lane = 0) const;

  /// Smallest iteration tag on child's chain; nullopt for an empty chain.
  std::optional<std::uint32_t> min_iter(NodeId child, std::size_t lane = 0) const;

  bool has_parents(NodeId child, std::size_t lane = 0) const {
    return head(child, lane) != kNullHandle;
  }

  /// Calls f(record) along child's chain, newest first.
  template <class F>
  void for_each_record(NodeId child, std::size_t lane, F&& f) const {
    for (std::uint64_t h = head(child, lane); h != kNullHandle;) {
      const ParentRecord& rec = record(h);
      f(rec);
      h = rec.next;
    }
  }

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t lanes() const { return lanes_; }
  std::size_t record_count() const;
  /// Bytes occupied by records (record_count() * 24).
  std::size_t record_bytes() const { return record_count() * sizeof(ParentRecord); }
  /// Bytes of the pre-allocated head array (8 per node per lane).
  std::size_t head_bytes() const { return heads_.bytes(); }

 private:
  static constexpr int kThreadShift = 48;

  std::size_t slot(NodeId child, std::size_t lane) const { return child * lanes_ + lane; }
  std::uint64_t head(NodeId child, std::size_t lane) const {
    return std::atomic_ref<std::uint64_t>(heads_[slot(child, lane)]).load(std::memory_order_acquire);
  }
  const ParentRecord& record(std::uint64_t handle) const {
    return arenas_[handle >> kThreadShift]->at(handle & ((std::uint64_t{1} << kThreadShift) - 1));
  }

  std::size_t num_nodes_;
  std::size_t lanes_;
  mutable BudgetedArray<std::uint64_t> heads_;
  std::vector<std::unique_ptr<ParentArena>> arenas_;
};

}  // namespace ife
