#include "ife/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "ife/error.hpp"

namespace ife {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t nanos_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

class LengthsMorsel final : public SourceMorsel {
 public:
  LengthsMorsel(std::uint64_t id, NodeId source, const CsrGraph& graph, MemoryBudget& budget, MorselSizes sizes,
                std::size_t output_chunk)
      : SourceMorsel(id, {source}, graph.num_nodes(), output_chunk),
        graph_(graph),
        frontiers_(graph.num_nodes(), sizes),
        state_(graph.num_nodes(), budget) {
    state_.init(source);
    frontiers_.set_active(source);
    launch();
  }

  void extend_frontier(const FrontierMorsel& fm, std::size_t) override {
    const std::uint32_t iter = cur_iter() + 1;
    frontiers_.for_each_active(fm, [&](NodeId u) {
      for (const Neighbor nbr : graph_.scan_fwd(u)) {
        if (state_.edge_compute(nbr.node, iter)) frontiers_.set_active(nbr.node);
      }
    });
  }

  void output(NodeRange range, const OutputOptions& options, RowSink& sink) const override {
    const NodeId src = sources().front();
    for (NodeId d = range.begin; d < range.end; ++d) {
      const std::uint8_t len = state_.length(d);
      if (len != kUnreached && options.wants(d)) sink.lengths.push_back({src, d, len});
    }
  }

 protected:
  std::optional<FrontierMorsel> grab_frontier() override { return frontiers_.grab_frontier_morsel(); }
  bool finish_frontier() override { return frontiers_.finish_frontier_morsel(); }
  bool frontier_exhausted() const override { return frontiers_.exhausted(); }
  SwapOutcome swap_frontiers() override { return frontiers_.swap_and_maybe_sparsify(); }
  std::size_t current_frontier_size() const override { return frontiers_.current_count(); }

 private:
  const CsrGraph& graph_;
  FrontierPair frontiers_;
  LengthState state_;
};

class PathsMorsel final : public SourceMorsel {
 public:
  PathsMorsel(std::uint64_t id, NodeId source, const CsrGraph& graph, std::size_t num_threads, MemoryBudget& budget,
              MorselSizes sizes, std::size_t output_chunk)
      : SourceMorsel(id, {source}, graph.num_nodes(), output_chunk),
        graph_(graph),
        frontiers_(graph.num_nodes(), sizes),
        state_(graph.num_nodes(), num_threads, budget) {
    state_.init(source);
    frontiers_.set_active(source);
    launch();
  }

  void extend_frontier(const FrontierMorsel& fm, std::size_t worker) override {
    const std::uint32_t iter = cur_iter() + 1;
    frontiers_.for_each_active(fm, [&](NodeId u) {
      for (const Neighbor nbr : graph_.scan_fwd(u)) {
        if (state_.edge_compute(u, nbr.node, nbr.edge, iter, worker)) frontiers_.set_active(nbr.node);
      }
    });
  }

  void output(NodeRange range, const OutputOptions& options, RowSink& sink) const override {
    const NodeId src = sources().front();
    const ParentsFn parents = [this](NodeId v) { return state_.parents().collect_parents(v, state_.dist(v)); };
    for (NodeId d = range.begin; d < range.end; ++d) {
      const std::uint8_t dist = state_.dist(d);
      if (dist == kUnreached || !options.wants(d)) continue;
      enumerate_shortest_paths(src, d, dist, parents, options.max_paths_per_pair,
                               [&](std::vector<std::uint64_t>&& path) {
                                 sink.paths.push_back({src, d, std::move(path)});
                               });
    }
  }

 protected:
  std::optional<FrontierMorsel> grab_frontier() override { return frontiers_.grab_frontier_morsel(); }
  bool finish_frontier() override { return frontiers_.finish_frontier_morsel(); }
  bool frontier_exhausted() const override { return frontiers_.exhausted(); }
  SwapOutcome swap_frontiers() override { return frontiers_.swap_and_maybe_sparsify(); }
  std::size_t current_frontier_size() const override { return frontiers_.current_count(); }

 private:
  const CsrGraph& graph_;
  FrontierPair frontiers_;
  PathState state_;
};

class MultiSourceMorsel final : public SourceMorsel {
 public:
  MultiSourceMorsel(std::uint64_t id, std::vector<NodeId> sources, const CsrGraph& graph, ReturnMode mode,
                    std::size_t num_threads, MemoryBudget& budget, MorselSizes sizes, std::size_t output_chunk)
      : SourceMorsel(id, sources, graph.num_nodes(), output_chunk),
        graph_(graph),
        lanes_(graph.num_nodes(), sources, mode, num_threads, budget, sizes) {
    launch();
  }

  void extend_frontier(const FrontierMorsel& fm, std::size_t worker) override {
    const std::uint32_t iter = cur_iter() + 1;
    // Each active node's adjacency list is scanned once for all of its lanes.
    lanes_.for_each_active(fm, [&](NodeId u) {
      for (const Neighbor nbr : graph_.scan_fwd(u)) lanes_.edge_compute(u, nbr.node, nbr.edge, iter, worker);
    });
  }

  void output(NodeRange range, const OutputOptions& options, RowSink& sink) const override {
    const std::span<const NodeId> srcs = lanes_.sources();
    for (NodeId d = range.begin; d < range.end; ++d) {
      if (!options.wants(d)) continue;
      for (std::size_t lane = 0; lane < srcs.size(); ++lane) {
        if (!lanes_.reached(d, lane)) continue;
        if (lanes_.mode() == ReturnMode::kLengths) {
          sink.lengths.push_back({srcs[lane], d, lanes_.length(d, lane)});
          continue;
        }
        const ParentsFn parents = [this, lane](NodeId v) {
          auto level = lanes_.dist(v, lane);
          return level ? lanes_.parents().collect_parents(v, *level, lane) : std::vector<ParentEdge>{};
        };
        enumerate_shortest_paths(srcs[lane], d, *lanes_.dist(d, lane), parents, options.max_paths_per_pair,
                                 [&](std::vector<std::uint64_t>&& path) {
                                   sink.paths.push_back({srcs[lane], d, std::move(path)});
                                 });
      }
    }
  }

 protected:
  std::optional<FrontierMorsel> grab_frontier() override { return lanes_.grab_frontier_morsel(); }
  bool finish_frontier() override { return lanes_.finish_frontier_morsel(); }
  bool frontier_exhausted() const override { return lanes_.exhausted(); }
  SwapOutcome swap_frontiers() override { return lanes_.swap_and_maybe_sparsify(); }
  std::size_t current_frontier_size() const override { return lanes_.current_count(); }

 private:
  const CsrGraph& graph_;
  LaneState lanes_;
};

/// Spin briefly, then yield, then sleep: waiting workers must not starve the
/// thread that is finishing an iteration.
class Backoff {
 public:
  void pause() {
    ++failures_;
    if (failures_ < 64) {
      std::this_thread::yield();
    } else {
      std::this_thread::sleep_for(std::chrono::microseconds(20));
    }
  }
  void reset() { failures_ = 0; }

 private:
  unsigned failures_ = 0;
};

struct WorkerContext {
  std::size_t id = 0;
  RowSink sink;
  std::uint64_t busy_nanos = 0;
};

void worker_loop(Dispatcher& dispatcher, const OutputOptions& options, WorkerContext& ctx,
                 const std::atomic<bool>& abort) {
  std::shared_ptr<SourceMorsel> sm;
  Backoff backoff;
  while (!abort.load(std::memory_order_relaxed)) {
    sm = dispatcher.grab_src_morsel_if_necessary(ctx.id, sm);
    if (!sm) return;
    const Phase phase = sm->phase();
    if (phase == Phase::kOutput) {
      auto om = sm->grab_output_morsel();
      if (!om) {
        backoff.pause();
        continue;
      }
      const auto start = Clock::now();
      sm->output(*om, options, ctx.sink);
      if (sm->finish_output_morsel()) dispatcher.retire(*sm);
      ctx.busy_nanos += nanos_since(start);
    } else if (phase == Phase::kFrontierExtension) {
      auto fm = sm->grab_frontier_morsel();
      if (!fm) {
        backoff.pause();
        continue;
      }
      const auto start = Clock::now();
      sm->extend_frontier(*fm, ctx.id);
      sm->check_if_frontier_finished();
      ctx.busy_nanos += nanos_since(start);
    } else {
      backoff.pause();
      continue;
    }
    backoff.reset();
  }
}

}  // namespace

void validate(const QuerySpec& spec) {
  if (spec.graph == nullptr) throw InvalidArgument("query has no graph");
  const std::size_t n = spec.graph->num_nodes();
  if (spec.num_threads == 0) throw InvalidArgument("num_threads must be >= 1");
  if (spec.num_threads >= WorkCounter::kMaxInflight) throw InvalidArgument("too many threads");
  if (spec.policy.k == 0) throw InvalidArgument("k must be >= 1");
  for (NodeId s : spec.sources) {
    if (s >= n) throw InvalidArgument("source " + std::to_string(s) + " is not a node of the graph");
  }
  if (!spec.destinations.empty() && spec.destinations.size() != n) {
    throw InvalidArgument("destination mask must have one entry per node");
  }
  if (spec.max_paths_per_pair && *spec.max_paths_per_pair == 0) {
    throw InvalidArgument("max paths per pair must be >= 1");
  }
}

double QueryStats::utilization() const {
  if (wall_nanos == 0 || busy_nanos.empty()) return 0.0;
  std::uint64_t busy = 0;
  for (auto b : busy_nanos) busy += b;
  return static_cast<double>(busy) / (static_cast<double>(wall_nanos) * static_cast<double>(busy_nanos.size()));
}

std::vector<LevelStat> QueryStats::merged_levels() const {
  std::vector<LevelStat> out;
  for (const auto& m : morsels) {
    for (const auto& lvl : m.levels) {
      if (out.size() <= lvl.level) {
        const std::size_t old = out.size();
        out.resize(lvl.level + 1);
        for (std::size_t i = old; i < out.size(); ++i) out[i].level = static_cast<std::uint32_t>(i);
      }
      out[lvl.level].frontier_size += lvl.frontier_size;
      out[lvl.level].nanos += lvl.nanos;
    }
  }
  return out;
}

MorselFactory make_morsel_factory(const QuerySpec& spec, MemoryBudget& budget) {
  const CsrGraph& graph = *spec.graph;
  const MorselSizes sizes = spec.frontier_morsels;
  const std::size_t chunk = spec.output_morsel;
  const std::size_t threads = spec.num_threads;
  const ReturnMode mode = spec.return_mode;
  if (spec.policy.kind == PolicyKind::kNTkMS) {
    return [&graph, &budget, sizes, chunk, threads, mode](std::uint64_t id, std::vector<NodeId> sources) {
      return std::make_shared<MultiSourceMorsel>(id, std::move(sources), graph, mode, threads, budget, sizes, chunk);
    };
  }
  if (mode == ReturnMode::kLengths) {
    return [&graph, &budget, sizes, chunk](std::uint64_t id, std::vector<NodeId> sources) {
      return std::make_shared<LengthsMorsel>(id, sources.front(), graph, budget, sizes, chunk);
    };
  }
  return [&graph, &budget, sizes, chunk, threads](std::uint64_t id, std::vector<NodeId> sources) {
    return std::make_shared<PathsMorsel>(id, sources.front(), graph, threads, budget, sizes, chunk);
  };
}

QueryResult run_query(const QuerySpec& spec) {
  validate(spec);
  MemoryBudget budget(spec.memory_limit_bytes);
  SourceTable table(spec.sources);
  Dispatcher dispatcher(spec.policy, table, spec.num_threads, make_morsel_factory(spec, budget));
  const OutputOptions options{spec.destinations.empty() ? nullptr : &spec.destinations, spec.max_paths_per_pair};

  std::vector<WorkerContext> contexts(spec.num_threads);
  std::atomic<bool> abort{false};
  std::exception_ptr error;
  std::mutex error_mu;

  const auto start = Clock::now();
  {
    std::vector<std::jthread> workers;
    workers.reserve(spec.num_threads);
    for (std::size_t w = 0; w < spec.num_threads; ++w) {
      contexts[w].id = w;
      workers.emplace_back([&, w] {
        try {
          worker_loop(dispatcher, options, contexts[w], abort);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          abort.store(true, std::memory_order_relaxed);
        }
      });
    }
  }
  const std::uint64_t wall = nanos_since(start);
  if (error) std::rethrow_exception(error);

  QueryResult result;
  for (auto& ctx : contexts) {
    result.lengths.insert(result.lengths.end(), ctx.sink.lengths.begin(), ctx.sink.lengths.end());
    std::move(ctx.sink.paths.begin(), ctx.sink.paths.end(), std::back_inserter(result.paths));
    result.stats.busy_nanos.push_back(ctx.busy_nanos);
  }
  std::sort(result.lengths.begin(), result.lengths.end());
  std::sort(result.paths.begin(), result.paths.end());
  result.stats.wall_nanos = wall;
  result.stats.morsels_launched = dispatcher.launched();
  result.stats.peak_live_morsels = dispatcher.peak_live();
  result.stats.peak_memory_bytes = budget.peak();
  result.stats.morsels = dispatcher.retired_summaries();
  return result;
}

void enumerate_shortest_paths(NodeId src, NodeId dst, std::uint32_t dst_level, const ParentsFn& parents,
                              std::optional<std::size_t> cap,
                              const std::function<void(std::vector<std::uint64_t>&&)>& emit) {
  if (dst_level == 0) {
    if (dst == src) emit({src});
    return;
  }
  std::unordered_map<NodeId, std::vector<ParentEdge>> cache;
  auto parents_of = [&](NodeId v) -> const std::vector<ParentEdge>& {
    auto it = cache.find(v);
    if (it == cache.end()) it = cache.emplace(v, parents(v)).first;
    return it->second;
  };

  struct Frame {
    NodeId node;
    std::uint32_t level;
    EdgeId via;  // edge from this node to the previous frame's node
    std::size_t next;
  };
  std::vector<Frame> stack;
  stack.push_back({dst, dst_level, 0, 0});
  std::size_t emitted = 0;
  while (!stack.empty()) {
    Frame& top = stack.back();
    const auto& candidates = parents_of(top.node);
    if (top.next == candidates.size()) {
      stack.pop_back();
      continue;
    }
    const ParentEdge pe = candidates[top.next++];
    if (top.level > 1) {
      stack.push_back({pe.parent, top.level - 1, pe.via_edge, 0});
      continue;
    }
    if (pe.parent != src) continue;
    std::vector<std::uint64_t> path;
    path.reserve(2 * stack.size() + 1);
    path.push_back(src);
    path.push_back(pe.via_edge);
    for (std::size_t i = stack.size(); i-- > 0;) {
      path.push_back(stack[i].node);
      if (i > 0) path.push_back(stack[i].via);
    }
    emit(std::move(path));
    if (cap && ++emitted >= *cap) return;
  }
}

SerialIfeResult serial_ife_oracle(const CsrGraph& g, NodeId src) {
  const std::size_t n = g.num_nodes();
  SerialIfeResult out;
  out.dist.assign(n, kNoDistance);
  out.parents.resize(n);
  std::vector<std::uint8_t> cur(n, 0);
  std::vector<std::uint8_t> next(n, 0);
  next[src] = 1;
  out.dist[src] = 0;
  for (std::uint32_t level = 0;; ++level) {
    std::swap(cur, next);
    std::fill(next.begin(), next.end(), std::uint8_t{0});
    const auto active = static_cast<std::size_t>(std::count(cur.begin(), cur.end(), std::uint8_t{1}));
    if (active == 0) break;
    out.level_sizes.push_back(active);
    for (NodeId u = 0; u < n; ++u) {
      if (cur[u] == 0) continue;
      for (const Neighbor nbr : g.scan_fwd(u)) {
        const NodeId v = nbr.node;
        if (out.dist[v] == kNoDistance) {
          out.dist[v] = level + 1;
          next[v] = 1;
        }
        if (out.dist[v] == level + 1) out.parents[v].push_back({u, nbr.edge});
      }
    }
  }
  for (auto& ps : out.parents) std::sort(ps.begin(), ps.end());
  return out;
}

}  // namespace ife
