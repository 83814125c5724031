#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>

#include "ife/error.hpp"

namespace ife {

/// Query-wide byte counter with an optional hard limit. Every pre-allocated
/// per-node array and every parent-arena block is charged here.
class MemoryBudget {
 public:
  explicit MemoryBudget(std::optional<std::size_t> limit = std::nullopt) : limit_(limit) {}

  MemoryBudget(const MemoryBudget&) = delete;
  MemoryBudget& operator=(const MemoryBudget&) = delete;

  /// Throws OutOfMemoryError if the limit would be exceeded.
  void reserve(std::size_t bytes);
  void release(std::size_t bytes) { used_.fetch_sub(bytes, std::memory_order_relaxed); }

  std::size_t used() const { return used_.load(std::memory_order_relaxed); }
  std::size_t peak() const { return peak_.load(std::memory_order_relaxed); }
  std::optional<std::size_t> limit() const { return limit_; }

 private:
  std::optional<std::size_t> limit_;
  std::atomic<std::size_t> used_{0};
  std::atomic<std::size_t> peak_{0};
};

/// Fixed-length array whose storage is charged to a MemoryBudget for its lifetime.
template <class T>
class BudgetedArray {
 public:
  BudgetedArray() = default;
  BudgetedArray(MemoryBudget& budget, std::size_t size, T fill) : budget_(&budget), size_(size) {
    budget.reserve(bytes());
    try {
      data_ = std::make_unique_for_overwrite<T[]>(size);
    } catch (const std::bad_alloc&) {
      budget.release(bytes());
      throw OutOfMemoryError("allocation of " + std::to_string(bytes()) + " bytes failed");
    }
    std::fill_n(data_.get(), size, fill);
  }

  BudgetedArray(BudgetedArray&& other) noexcept { swap(other); }
  BudgetedArray& operator=(BudgetedArray&& other) noexcept {
    BudgetedArray tmp(std::move(other));
    swap(tmp);
    return *this;
  }
  ~BudgetedArray() {
    if (budget_ != nullptr) budget_->release(bytes());
  }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T* data() { return data_.get(); }
  const T* data() const { return data_.get(); }
  std::size_t size() const { return size_; }
  std::size_t bytes() const { return size_ * sizeof(T); }
  std::span<T> span() { return {data_.get(), size_}; }
  std::span<const T> span() const { return {data_.get(), size_}; }

 private:
  void swap(BudgetedArray& other) noexcept {
    std::swap(budget_, other.budget_);
    std::swap(size_, other.size_);
    std::swap(data_, other.data_);
  }

  MemoryBudget* budget_ = nullptr;
  std::size_t size_ = 0;
  std::unique_ptr<T[]> data_;
};

inline void MemoryBudget::reserve(std::size_t bytes) {
  const std::size_t now = used_.fetch_add(bytes, std::memory_order_relaxed) + bytes;
  if (limit_ && now > *limit_) {
    used_.fetch_sub(bytes, std::memory_order_relaxed);
    throw OutOfMemoryError("memory budget exhausted: need " + std::to_string(bytes) + " more bytes, " +
                           std::to_string(now - bytes) + " of " + std::to_string(*limit_) + " in use");
  }
  std::size_t peak = peak_.load(std::memory_order_relaxed);
  while (now > peak && !peak_.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

}  // namespace ife
