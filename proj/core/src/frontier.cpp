#include "ife/frontier.hpp"

#include <algorithm>
#include <cstring>

namespace ife {

void WorkCounter::reset(std::uint64_t total) {
  word_.store(std::min(total, kMaxChunks), std::memory_order_release);
}

std::optional<std::uint64_t> WorkCounter::acquire() {
  std::uint64_t cur = word_.load(std::memory_order_acquire);
  while (true) {
    const std::uint64_t total = cur & kFieldMask;
    const std::uint64_t cursor = (cur >> kCursorShift) & kFieldMask;
    if (cursor >= total) return std::nullopt;
    const std::uint64_t desired = cur + (std::uint64_t{1} << kCursorShift) + (std::uint64_t{1} << kInflightShift);
    if (word_.compare_exchange_weak(cur, desired, std::memory_order_acq_rel, std::memory_order_acquire)) {
      return cursor;
    }
  }
}

bool WorkCounter::release() {
  const std::uint64_t prior = word_.fetch_sub(std::uint64_t{1} << kInflightShift, std::memory_order_acq_rel);
  const std::uint64_t inflight = prior >> kInflightShift;
  const std::uint64_t total = prior & kFieldMask;
  const std::uint64_t cursor = (prior >> kCursorShift) & kFieldMask;
  return inflight == 1 && cursor == total;
}

bool WorkCounter::exhausted() const {
  const std::uint64_t cur = word_.load(std::memory_order_acquire);
  return ((cur >> kCursorShift) & kFieldMask) >= (cur & kFieldMask);
}

std::uint64_t WorkCounter::inflight() const { return word_.load(std::memory_order_acquire) >> kInflightShift; }

MorselCarver::MorselCarver(std::size_t num_nodes, MorselSizes sizes) : num_nodes_(num_nodes), sizes_(sizes) {
  sizes_.dense = std::max<std::size_t>(sizes_.dense, 1);
  sizes_.sparse = std::max<std::size_t>(sizes_.sparse, 1);
}

void MorselCarver::start_round(std::size_t domain, std::size_t morsel_size) {
  domain_ = domain;
  // Grow the morsel if the chunk index would not fit the counter.
  const std::size_t min_chunk = (domain + WorkCounter::kMaxChunks - 1) / WorkCounter::kMaxChunks;
  chunk_ = std::max(morsel_size, std::max<std::size_t>(min_chunk, 1));
  counter_.reset((domain + chunk_ - 1) / chunk_);
}

std::optional<FrontierMorsel> MorselCarver::grab() {
  auto index = counter_.acquire();
  if (!index) return std::nullopt;
  FrontierMorsel fm;
  fm.kind = sparse_ ? FrontierMorsel::Kind::kSparse : FrontierMorsel::Kind::kDense;
  fm.begin = *index * chunk_;
  fm.end = std::min(domain_, fm.begin + chunk_);
  return fm;
}

void DenseFrontier::clear() {
  std::fill(active_.begin(), active_.end(), std::uint8_t{0});
  count_.store(0, std::memory_order_relaxed);
}

void DenseFrontier::clear(std::span<const NodeId> active_ids) {
  for (NodeId v : active_ids) active_[v] = 0;
  count_.store(0, std::memory_order_relaxed);
}

FrontierPair::FrontierPair(std::size_t num_nodes, MorselSizes sizes)
    : frontiers_{DenseFrontier(num_nodes), DenseFrontier(num_nodes)}, carver_(num_nodes, sizes) {}

SwapOutcome FrontierPair::swap_and_maybe_sparsify() {
  // The outgoing current becomes the new next; the overlay still lists its
  // active entries when it was sparse.
  if (carver_.sparse()) {
    current().clear(carver_.overlay());
  } else if (current().count() != 0) {
    current().clear();
  }
  cur_ ^= 1;
  const std::size_t active = current().count();
  if (active == 0) {
    carver_.rebuild(0, [](NodeId) { return false; });
    carver_.close();
    return SwapOutcome::kConverged;
  }
  const DenseFrontier& cur = current();
  carver_.rebuild(active, [&cur](NodeId v) { return cur.is_active(v); });
  return SwapOutcome::kContinue;
}

}  // namespace ife
