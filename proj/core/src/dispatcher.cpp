#include "ife/dispatcher.hpp"

#include <algorithm>

#include "ife/error.hpp"

namespace ife {

namespace {

std::size_t chunk_for(std::size_t domain, std::size_t wanted) {
  const std::size_t min_chunk = (domain + WorkCounter::kMaxChunks - 1) / WorkCounter::kMaxChunks;
  return std::max({wanted, min_chunk, std::size_t{1}});
}

}  // namespace

SourceMorsel::SourceMorsel(std::uint64_t id, std::vector<NodeId> sources, std::size_t num_nodes,
                           std::size_t output_chunk)
    : id_(id), sources_(std::move(sources)), num_nodes_(num_nodes), output_chunk_(chunk_for(num_nodes, output_chunk)) {}

void SourceMorsel::launch() {
  level_start_ = std::chrono::steady_clock::now();
  if (swap_frontiers() == SwapOutcome::kConverged) {
    output_counter_.reset((num_nodes_ + output_chunk_ - 1) / output_chunk_);
    phase_.store(Phase::kOutput, std::memory_order_release);
  }
}

SwapOutcome SourceMorsel::advance() {
  const auto now = std::chrono::steady_clock::now();
  const std::uint32_t level = cur_iter_.load(std::memory_order_relaxed);
  levels_.push_back({level, current_frontier_size(),
                     static_cast<std::uint64_t>(
                         std::chrono::duration_cast<std::chrono::nanoseconds>(now - level_start_).count())});
  level_start_ = now;
  // Published to the next round's workers by the release in swap_frontiers().
  cur_iter_.store(level + 1, std::memory_order_relaxed);
  const SwapOutcome outcome = swap_frontiers();
  if (outcome == SwapOutcome::kConverged) {
    cur_iter_.store(level, std::memory_order_relaxed);
    output_counter_.reset((num_nodes_ + output_chunk_ - 1) / output_chunk_);
    phase_.store(Phase::kOutput, std::memory_order_release);
  }
  return outcome;
}

BoundaryAction SourceMorsel::check_if_frontier_finished() {
  if (!finish_frontier()) return BoundaryAction::kNone;
  return advance() == SwapOutcome::kConverged ? BoundaryAction::kEnteredOutput : BoundaryAction::kAdvanced;
}

std::optional<NodeRange> SourceMorsel::grab_output_morsel() {
  auto index = output_counter_.acquire();
  if (!index) return std::nullopt;
  const NodeId begin = *index * output_chunk_;
  return NodeRange{begin, std::min<NodeId>(num_nodes_, begin + output_chunk_)};
}

bool SourceMorsel::finish_output_morsel() {
  if (!output_counter_.release()) return false;
  phase_.store(Phase::kRetired, std::memory_order_release);
  return true;
}

bool SourceMorsel::can_yield_work() const {
  switch (phase()) {
    case Phase::kFrontierExtension:
      return !frontier_exhausted();
    case Phase::kOutput:
      return !output_counter_.exhausted();
    case Phase::kRetired:
      break;
  }
  return false;
}

DispatchPolicy DispatchPolicy::parse(std::string_view name, std::optional<std::size_t> k) {
  DispatchPolicy p;
  if (name == "1t1s") {
    p.kind = PolicyKind::k1T1S;
    p.k = 1;
  } else if (name == "nt1s") {
    p.kind = PolicyKind::kNT1S;
    p.k = 1;
  } else if (name == "ntks") {
    p.kind = PolicyKind::kNTkS;
    p.k = k.value_or(kDefaultK);
  } else if (name == "ntkms") {
    p.kind = PolicyKind::kNTkMS;
    p.k = k.value_or(kDefaultMultiSourceK);
  } else {
    throw InvalidArgument("unknown policy '" + std::string(name) + "' (expected 1t1s, nt1s, ntks or ntkms)");
  }
  if (p.k == 0) throw InvalidArgument("k must be >= 1");
  return p;
}

std::size_t DispatchPolicy::max_live(std::size_t num_threads) const {
  switch (kind) {
    case PolicyKind::k1T1S:
      return num_threads;
    case PolicyKind::kNT1S:
      return 1;
    case PolicyKind::kNTkS:
    case PolicyKind::kNTkMS:
      break;
  }
  return k;
}

std::string_view DispatchPolicy::name() const {
  switch (kind) {
    case PolicyKind::k1T1S:
      return "1t1s";
    case PolicyKind::kNT1S:
      return "nt1s";
    case PolicyKind::kNTkS:
      return "ntks";
    case PolicyKind::kNTkMS:
      break;
  }
  return "ntkms";
}

std::string DispatchPolicy::label() const {
  if (kind == PolicyKind::kNTkS || kind == PolicyKind::kNTkMS) {
    return std::string(name()) + "(k=" + std::to_string(k) + ")";
  }
  return std::string(name());
}

std::vector<NodeId> SourceTable::take(std::size_t max) {
  const std::size_t begin = std::min(cursor_.fetch_add(max, std::memory_order_relaxed), sources_.size());
  const std::size_t end = std::min(begin + max, sources_.size());
  return {sources_.begin() + static_cast<std::ptrdiff_t>(begin), sources_.begin() + static_cast<std::ptrdiff_t>(end)};
}

Dispatcher::Dispatcher(DispatchPolicy policy, SourceTable& sources, std::size_t num_workers, MorselFactory factory)
    : policy_(policy),
      sources_(sources),
      num_workers_(num_workers),
      max_live_(policy.max_live(num_workers)),
      factory_(std::move(factory)),
      rr_cursor_(num_workers, 0) {
  if (num_workers == 0) throw InvalidArgument("dispatcher needs at least one worker");
}

std::shared_ptr<SourceMorsel> Dispatcher::grab_src_morsel_if_necessary(std::size_t worker,
                                                                      const std::shared_ptr<SourceMorsel>& current) {
  if (policy_.kind == PolicyKind::k1T1S) return grab_exclusive(worker, current);
  return grab_shared(worker, current);
}

std::shared_ptr<SourceMorsel> Dispatcher::launch_locked() {
  std::erase_if(live_, [](const auto& m) { return m->phase() == Phase::kRetired; });
  std::vector<NodeId> batch = sources_.take(policy_.sources_per_morsel());
  if (batch.empty()) return nullptr;
  auto morsel = factory_(next_id_++, std::move(batch));
  live_.push_back(morsel);
  launched_.fetch_add(1, std::memory_order_relaxed);
  if (live_.size() > peak_live_.load(std::memory_order_relaxed)) {
    peak_live_.store(live_.size(), std::memory_order_relaxed);
  }
  return morsel;
}

std::shared_ptr<SourceMorsel> Dispatcher::grab_exclusive(std::size_t, const std::shared_ptr<SourceMorsel>& current) {
  // Only the launching worker ever sees a 1T1S morsel, so an unretired
  // current morsel always has work for it.
  if (current && current->phase() != Phase::kRetired) return current;
  std::lock_guard lock(mu_);
  return launch_locked();
}

std::shared_ptr<SourceMorsel> Dispatcher::grab_shared(std::size_t worker,
                                                      const std::shared_ptr<SourceMorsel>& current) {
  // Sticky: stay on the current morsel while it can hand out work.
  if (current && current->can_yield_work()) return current;

  std::lock_guard lock(mu_);
  std::erase_if(live_, [](const auto& m) { return m->phase() == Phase::kRetired; });
  if (live_.size() < max_live_ && !sources_.exhausted()) {
    if (auto morsel = launch_locked()) return morsel;
  }
  if (live_.empty()) return nullptr;

  // Help another live morsel, round-robin starting after the worker's previous one.
  std::size_t start = rr_cursor_[worker];
  if (current) {
    auto it = std::find(live_.begin(), live_.end(), current);
    if (it != live_.end()) start = static_cast<std::size_t>(it - live_.begin()) + 1;
  }
  const std::size_t n = live_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = (start + i) % n;
    if (live_[pos]->can_yield_work()) {
      rr_cursor_[worker] = pos + 1;
      return live_[pos];
    }
  }
  // Nothing available this instant (every live morsel is at a boundary);
  // the caller retries.
  rr_cursor_[worker] = start + 1;
  return live_[start % n];
}

void Dispatcher::retire(const SourceMorsel& morsel) {
  std::lock_guard lock(mu_);
  std::erase_if(live_, [&](const auto& m) { return m.get() == &morsel; });
  auto& summary = retired_.emplace_back();
  summary.id = morsel.id();
  summary.sources.assign(morsel.sources().begin(), morsel.sources().end());
  summary.levels = morsel.levels();
}

std::vector<MorselSummary> Dispatcher::retired_summaries() const {
  std::lock_guard lock(mu_);
  auto out = retired_;
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

}  // namespace ife
