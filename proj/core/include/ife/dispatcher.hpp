#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ife/frontier.hpp"
#include "ife/graph.hpp"
#include "ife/results.hpp"

namespace ife {

enum class Phase : std::uint8_t { kFrontierExtension, kOutput, kRetired };
enum class BoundaryAction { kNone, kAdvanced, kEnteredOutput };

struct NodeRange {
  NodeId begin = 0;
  NodeId end = 0;

  friend bool operator==(const NodeRange&, const NodeRange&) = default;
};

/// Timing of one frontier level: `frontier_size` nodes were extended in `nanos`.
struct LevelStat {
  std::uint32_t level = 0;
  std::size_t frontier_size = 0;
  std::uint64_t nanos = 0;
};

/// State of one IFE subroutine (or of up to 64 for a multi-source morsel)
/// and its FRONTIER_EXTENSION -> OUTPUT -> retired lifecycle.
///
/// Subclasses own the frontiers and auxiliary arrays; this class owns the
/// phase machine, the iteration counter and output-range carving.
class SourceMorsel {
 public:
  static constexpr std::size_t kDefaultOutputChunk = 4096;

  SourceMorsel(std::uint64_t id, std::vector<NodeId> sources, std::size_t num_nodes,
               std::size_t output_chunk = kDefaultOutputChunk);
  virtual ~SourceMorsel() = default;

  SourceMorsel(const SourceMorsel&) = delete;
  SourceMorsel& operator=(const SourceMorsel&) = delete;

  std::uint64_t id() const { return id_; }
  std::span<const NodeId> sources() const { return sources_; }
  Phase phase() const { return phase_.load(std::memory_order_acquire); }
  /// Level of the frontier currently being extended (the source level is 0).
  std::uint32_t cur_iter() const { return cur_iter_.load(std::memory_order_relaxed); }

  std::optional<FrontierMorsel> grab_frontier_morsel() { return grab_frontier(); }

  /// Must follow every successfully grabbed frontier morsel. The last
  /// finisher of an iteration swaps frontiers and either advances or enters OUTPUT.
  BoundaryAction check_if_frontier_finished();

  std::optional<NodeRange> grab_output_morsel();
  /// Must follow every successfully grabbed output morsel. True for the
  /// single call that retires the morsel.
  bool finish_output_morsel();

  /// Whether a frontier or output morsel is available right now.
  bool can_yield_work() const;

  /// Applies the edge compute to every active node of `fm`.
  virtual void extend_frontier(const FrontierMorsel& fm, std::size_t worker) = 0;
  /// Emits rows for the destinations in `range`.
  virtual void output(NodeRange range, const OutputOptions& options, RowSink& sink) const = 0;

  /// Per-level timings; complete once the morsel has entered OUTPUT.
  const std::vector<LevelStat>& levels() const { return levels_; }

 protected:
  /// Derived constructors call this once their initial frontier is seeded.
  void launch();

  virtual std::optional<FrontierMorsel> grab_frontier() = 0;
  virtual bool finish_frontier() = 0;
  virtual bool frontier_exhausted() const = 0;
  virtual SwapOutcome swap_frontiers() = 0;
  virtual std::size_t current_frontier_size() const = 0;

  std::size_t num_nodes() const { return num_nodes_; }

 private:
  SwapOutcome advance();

  std::uint64_t id_;
  std::vector<NodeId> sources_;
  std::size_t num_nodes_;
  std::size_t output_chunk_;
  std::atomic<Phase> phase_{Phase::kFrontierExtension};
  std::atomic<std::uint32_t> cur_iter_{0};
  WorkCounter output_counter_;
  std::vector<LevelStat> levels_;
  std::chrono::steady_clock::time_point level_start_;
};

enum class PolicyKind { k1T1S, kNT1S, kNTkS, kNTkMS };

struct DispatchPolicy {
  static constexpr std::size_t kDefaultK = 32;
  static constexpr std::size_t kDefaultMultiSourceK = 4;

  PolicyKind kind = PolicyKind::kNTkS;
  /// Concurrent source morsels for nTkS / nTkMS; ignored otherwise.
  std::size_t k = kDefaultK;

  /// Parses `1t1s | nt1s | ntks | ntkms`; k defaults per policy.
  static DispatchPolicy parse(std::string_view name, std::optional<std::size_t> k = std::nullopt);

  std::size_t sources_per_morsel() const { return kind == PolicyKind::kNTkMS ? kLaneWidthSources : 1; }
  /// Upper bound on simultaneously live morsels.
  std::size_t max_live(std::size_t num_threads) const;
  /// "1t1s", "nt1s", "ntks", "ntkms".
  std::string_view name() const;
  /// Name plus k where it matters, e.g. "ntks(k=32)".
  std::string label() const;

 private:
  static constexpr std::size_t kLaneWidthSources = 64;
};

/// Ordered query sources; each is handed out exactly once.
class SourceTable {
 public:
  explicit SourceTable(std::vector<NodeId> sources) : sources_(std::move(sources)) {}

  /// Takes up to `max` sources; empty when exhausted.
  std::vector<NodeId> take(std::size_t max);
  std::size_t size() const { return sources_.size(); }
  bool exhausted() const { return cursor_.load(std::memory_order_relaxed) >= sources_.size(); }
  std::span<const NodeId> all() const { return sources_; }

 private:
  std::vector<NodeId> sources_;
  std::atomic<std::size_t> cursor_{0};
};

using MorselFactory = std::function<std::shared_ptr<SourceMorsel>(std::uint64_t id, std::vector<NodeId> sources)>;

struct MorselSummary {
  std::uint64_t id = 0;
  std::vector<NodeId> sources;
  std::vector<LevelStat> levels;
};

/// Hands source morsels to workers according to a DispatchPolicy.
class Dispatcher {
 public:
  Dispatcher(DispatchPolicy policy, SourceTable& sources, std::size_t num_workers, MorselFactory factory);

  /// Returns the morsel `worker` should work on next, or null once every
  /// source has been launched and every morsel retired. `current` is the
  /// morsel the worker last used (may be null).
  std::shared_ptr<SourceMorsel> grab_src_morsel_if_necessary(std::size_t worker,
                                                             const std::shared_ptr<SourceMorsel>& current);

  /// Called by the worker whose finish_output_morsel() returned true.
  void retire(const SourceMorsel& morsel);

  const DispatchPolicy& policy() const { return policy_; }
  std::size_t launched() const { return launched_.load(std::memory_order_relaxed); }
  std::size_t peak_live() const { return peak_live_.load(std::memory_order_relaxed); }
  /// Summaries of retired morsels, ordered by morsel id.
  std::vector<MorselSummary> retired_summaries() const;

 private:
  std::shared_ptr<SourceMorsel> launch_locked();
  std::shared_ptr<SourceMorsel> grab_exclusive(std::size_t worker, const std::shared_ptr<SourceMorsel>& current);
  std::shared_ptr<SourceMorsel> grab_shared(std::size_t worker, const std::shared_ptr<SourceMorsel>& current);

  DispatchPolicy policy_;
  SourceTable& sources_;
  std::size_t num_workers_;
  std::size_t max_live_;
  MorselFactory factory_;

  mutable std::mutex mu_;
  std::vector<std::shared_ptr<SourceMorsel>> live_;
  std::vector<std::size_t> rr_cursor_;
  std::vector<MorselSummary> retired_;
  std::uint64_t next_id_ = 0;
  std::atomic<std::size_t> launched_{0};
  std::atomic<std::size_t> peak_live_{0};
};

}  // namespace ife
