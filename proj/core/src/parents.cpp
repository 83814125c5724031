#include "ife/parents.hpp"

#include <algorithm>
#include <bit>
#include <new>

#include "ife/error.hpp"

namespace ife {

ParentArena::~ParentArena() {
  if (reserved_bytes_ != 0) budget_->release(reserved_bytes_);
}

std::pair<std::size_t, std::size_t> ParentArena::locate(std::uint64_t index) {
  // Block b holds kFirstBlockRecords << b records and starts at kFirstBlockRecords * (2^b - 1).
  const std::size_t block = static_cast<std::size_t>(std::bit_width(index / kFirstBlockRecords + 1)) - 1;
  const std::size_t start = kFirstBlockRecords * ((std::size_t{1} << block) - 1);
  return {block, static_cast<std::size_t>(index) - start};
}

std::uint64_t ParentArena::append(const ParentRecord& rec) {
  if (size_ == capacity_) {
    if (num_blocks_ == kMaxBlocks) throw OutOfMemoryError("parent arena block limit reached");
    const std::size_t records = kFirstBlockRecords << num_blocks_;
    const std::size_t bytes = records * sizeof(ParentRecord);
    budget_->reserve(bytes);
    try {
      blocks_[num_blocks_] = std::make_unique_for_overwrite<ParentRecord[]>(records);
    } catch (const std::bad_alloc&) {
      budget_->release(bytes);
      throw OutOfMemoryError("parent arena allocation of " + std::to_string(bytes) + " bytes failed");
    }
    ++num_blocks_;
    capacity_ += records;
    reserved_bytes_ += bytes;
  }
  const std::uint64_t index = size_++;
  at(index) = rec;
  return index;
}

ParentStore::ParentStore(std::size_t num_nodes, std::size_t num_threads, MemoryBudget& budget, std::size_t lanes)
    : num_nodes_(num_nodes), lanes_(lanes), heads_(budget, num_nodes * lanes, kNullHandle) {
  if (num_threads == 0 || num_threads >= (std::size_t{1} << 16) - 1) {
    throw InvalidArgument("parent store supports 1..65534 threads");
  }
  arenas_.reserve(num_threads);
  for (std::size_t t = 0; t < num_threads; ++t) arenas_.push_back(std::make_unique<ParentArena>(budget));
}

void ParentStore::add_parent_edge(NodeId child, NodeId parent, EdgeId via_edge, std::uint32_t iter,
                                  std::size_t thread, std::size_t lane) {
  ParentArena& arena = *arenas_[thread];
  const std::uint64_t index = arena.append({ParentRecord::pack(parent, iter), via_edge, kNullHandle});
  ParentRecord& rec = arena.at(index);
  const std::uint64_t handle = (static_cast<std::uint64_t>(thread) << kThreadShift) | index;

  std::atomic_ref<std::uint64_t> head_ref(heads_[slot(child, lane)]);
  std::uint64_t observed = head_ref.load(std::memory_order_relaxed);
  do {
    rec.next = observed;
  } while (!head_ref.compare_exchange_weak(observed, handle, std::memory_order_release, std::memory_order_relaxed));
}

std::vector<ParentEdge> ParentStore::collect_parents(NodeId child, std::uint32_t at_iter, std::size_t lane) const {
  std::vector<ParentEdge> out;
  for_each_record(child, lane, [&](const ParentRecord& rec) {
    if (rec.iter() == at_iter) out.push_back({rec.parent(), rec.via_edge});
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<std::uint32_t> ParentStore::min_iter(NodeId child, std::size_t lane) const {
  std::optional<std::uint32_t> best;
  for_each_record(child, lane, [&](const ParentRecord& rec) {
    if (!best || rec.iter() < *best) best = rec.iter();
  });
  return best;
}

std::size_t ParentStore::record_count() const {
  std::size_t total = 0;
  for (const auto& arena : arenas_) total += arena->size();
  return total;
}

}  // namespace ife
