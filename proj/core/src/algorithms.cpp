#include "ife/algorithms.hpp"

#include <algorithm>

namespace ife {

std::vector<unsigned> decode_set_bits(std::uint64_t word) {
  std::vector<unsigned> out;
  out.reserve(static_cast<std::size_t>(std::popcount(word)));
  for_each_set_bit(word, [&](unsigned i) { out.push_back(i); });
  return out;
}

LengthState::LengthState(std::size_t num_nodes, MemoryBudget& budget)
    : len_(budget, num_nodes, kUnreached), visited_(budget, num_nodes, 0) {}

PathState::PathState(std::size_t num_nodes, std::size_t num_threads, MemoryBudget& budget)
    : visited_(budget, num_nodes, 0), dist_(budget, num_nodes, kUnreached), parents_(num_nodes, num_threads, budget) {}

bool PathState::edge_compute(NodeId u, NodeId v, EdgeId via, std::uint32_t iter, std::size_t thread) {
  std::atomic_ref<std::uint8_t> dist(dist_[v]);
  std::uint8_t seen = dist.load(std::memory_order_relaxed);
  // Reached at an earlier level: (u, v) is not on a shortest path.
  if (seen != kUnreached && seen != iter) return false;
  check_depth(iter);
  if (seen == kUnreached &&
      !dist.compare_exchange_strong(seen, static_cast<std::uint8_t>(iter), std::memory_order_relaxed) &&
      seen != iter) {
    return false;
  }
  parents_.add_parent_edge(v, u, via, iter, thread);
  std::atomic_ref<std::uint8_t>(visited_[v]).store(1, std::memory_order_relaxed);
  return true;
}

LaneState::LaneState(std::size_t num_nodes, std::span<const NodeId> sources, ReturnMode mode,
                     std::size_t num_threads, MemoryBudget& budget, MorselSizes sizes)
    : num_nodes_(num_nodes),
      sources_(sources.begin(), sources.end()),
      mode_(mode),
      frontier_(budget, num_nodes, 0),
      next_(budget, num_nodes, 0),
      visited_(budget, num_nodes, 0),
      carver_(num_nodes, sizes) {
  if (sources_.empty() || sources_.size() > kLaneWidth) {
    throw InvalidArgument("a multi-source morsel holds 1..64 sources");
  }
  if (mode_ == ReturnMode::kLengths) {
    len_ = BudgetedArray<std::uint8_t>(budget, num_nodes * kLaneWidth, kUnreached);
  } else {
    parents_.emplace(num_nodes, num_threads, budget, kLaneWidth);
  }
  std::size_t seeded = 0;
  for (std::size_t lane = 0; lane < sources_.size(); ++lane) {
    const NodeId s = sources_[lane];
    if (next_[s] == 0) ++seeded;
    next_[s] |= std::uint64_t{1} << lane;
    visited_[s] |= std::uint64_t{1} << lane;
    if (mode_ == ReturnMode::kLengths) len_[s * kLaneWidth + lane] = 0;
  }
  next_count_.store(seeded, std::memory_order_relaxed);
}

SwapOutcome LaneState::swap_and_maybe_sparsify() {
  if (carver_.sparse()) {
    for (NodeId v : carver_.overlay()) frontier_[v] = 0;
  } else if (current_count_ != 0) {
    std::fill_n(frontier_.data(), num_nodes_, std::uint64_t{0});
  }
  std::swap(frontier_, next_);
  current_count_ = next_count_.exchange(0, std::memory_order_relaxed);
  if (current_count_ == 0) {
    carver_.rebuild(0, [](NodeId) { return false; });
    carver_.close();
    return SwapOutcome::kConverged;
  }
  const bool sparse = carver_.rebuild(current_count_, [this](NodeId v) { return frontier_[v] != 0; });
  if (mode_ == ReturnMode::kPaths) {
    if (sparse) {
      for (NodeId v : carver_.overlay()) visited_[v] |= frontier_[v];
    } else {
      for (NodeId v = 0; v < num_nodes_; ++v) visited_[v] |= frontier_[v];
    }
  }
  return SwapOutcome::kContinue;
}

bool LaneState::reached(NodeId v, std::size_t lane) const {
  if (mode_ == ReturnMode::kLengths) return length(v, lane) != kUnreached;
  return v == sources_[lane] || parents_->has_parents(v, lane);
}

std::optional<std::uint32_t> LaneState::dist(NodeId v, std::size_t lane) const {
  if (v == sources_[lane]) return 0;
  return parents_->min_iter(v, lane);
}

std::size_t LaneState::preallocated_bytes() const {
  std::size_t bytes = frontier_.bytes() + next_.bytes() + visited_.bytes() + len_.bytes();
  if (parents_) bytes += parents_->head_bytes();
  return bytes;
}

}  // namespace ife
