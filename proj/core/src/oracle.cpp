#include "ife/oracle.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>

#include "ife/error.hpp"

namespace ife::oracle {

AdjacencyMap AdjacencyMap::from_graph(const CsrGraph& g) {
  AdjacencyMap adj;
  adj.num_nodes = g.num_nodes();
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    auto& list = adj.out[u];
    for (const Neighbor nbr : g.scan_fwd(u)) list.push_back(nbr);
  }
  return adj;
}

std::map<NodeId, std::multiset<NodeId>> load_neighbor_multisets(std::istream& in, bool directed) {
  std::map<NodeId, std::multiset<NodeId>> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#') continue;
    NodeId u = std::stoull(first);
    NodeId v = 0;
    fields >> v;
    out[u].insert(v);
    if (!directed) out[v].insert(u);
  }
  return out;
}

std::vector<std::optional<std::uint32_t>> bfs_distances(const AdjacencyMap& adj, NodeId src) {
  std::vector<std::optional<std::uint32_t>> dist(adj.num_nodes);
  std::deque<NodeId> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    auto it = adj.out.find(u);
    if (it == adj.out.end()) continue;
    for (const Neighbor& nbr : it->second) {
      if (!dist[nbr.node]) {
        dist[nbr.node] = *dist[u] + 1;
        queue.push_back(nbr.node);
      }
    }
  }
  return dist;
}

namespace {

void extend_paths(const AdjacencyMap& adj, const std::vector<std::optional<std::uint32_t>>& dist, NodeId dst,
                  Path& prefix, std::set<Path>& out) {
  const NodeId u = prefix.back();
  if (u == dst) {
    out.insert(prefix);
    return;
  }
  auto it = adj.out.find(u);
  if (it == adj.out.end()) return;
  for (const Neighbor& nbr : it->second) {
    if (!dist[nbr.node] || *dist[nbr.node] != *dist[u] + 1 || *dist[nbr.node] > *dist[dst]) continue;
    prefix.push_back(nbr.edge);
    prefix.push_back(nbr.node);
    extend_paths(adj, dist, dst, prefix, out);
    prefix.resize(prefix.size() - 2);
  }
}

}  // namespace

std::set<Path> brute_force_all_shortest_paths(const CsrGraph& g, NodeId src, NodeId dst) {
  if (g.num_nodes() > kExhaustiveLimit) {
    throw InvalidArgument("exhaustive path enumeration is limited to graphs of at most 64 nodes");
  }
  const AdjacencyMap adj = AdjacencyMap::from_graph(g);
  const auto dist = bfs_distances(adj, src);
  std::set<Path> out;
  if (!dist[dst]) return out;
  Path prefix{src};
  extend_paths(adj, dist, dst, prefix, out);
  return out;
}

ReferenceResult reference_result(const CsrGraph& g, std::span<const NodeId> sources, bool with_paths) {
  ReferenceResult ref;
  const AdjacencyMap adj = AdjacencyMap::from_graph(g);
  for (NodeId s : sources) {
    const auto dist = bfs_distances(adj, s);
    for (NodeId d = 0; d < dist.size(); ++d) {
      if (!dist[d]) continue;
      ref.distances[{s, d}] = *dist[d];
      if (with_paths) ref.shortest_paths[{s, d}] = brute_force_all_shortest_paths(g, s, d);
    }
  }
  return ref;
}

std::vector<LengthRow> expected_length_rows(const CsrGraph& g, std::span<const NodeId> sources,
                                            std::span<const std::uint8_t> destinations) {
  std::vector<LengthRow> rows;
  const AdjacencyMap adj = AdjacencyMap::from_graph(g);
  for (NodeId s : sources) {
    const auto dist = bfs_distances(adj, s);
    for (NodeId d = 0; d < dist.size(); ++d) {
      if (dist[d] && (destinations.empty() || destinations[d] != 0)) rows.push_back({s, d, *dist[d]});
    }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::string_view to_string(TraceAction action) {
  switch (action) {
    case TraceAction::kLaunch:
      return "launch";
    case TraceAction::kJoin:
      return "join";
    case TraceAction::kFrontierMorsel:
      return "frontier";
    case TraceAction::kOutputMorsel:
      return "output";
    case TraceAction::kIdle:
      return "idle";
    case TraceAction::kAdvance:
      return "advance";
    case TraceAction::kEnterOutput:
      return "enter-output";
    case TraceAction::kRetire:
      return "retire";
    case TraceAction::kExit:
      break;
  }
  return "exit";
}

DispatchTrace replay_policy_single_threaded(const QuerySpec& spec, std::size_t max_steps) {
  validate(spec);
  MemoryBudget budget(spec.memory_limit_bytes);
  SourceTable table(spec.sources);
  Dispatcher dispatcher(spec.policy, table, spec.num_threads, make_morsel_factory(spec, budget));
  const OutputOptions options{spec.destinations.empty() ? nullptr : &spec.destinations, spec.max_paths_per_pair};

  struct SimWorker {
    std::shared_ptr<SourceMorsel> sm;
    std::optional<FrontierMorsel> fm;
    std::optional<NodeRange> om;
    bool done = false;
  };
  std::vector<SimWorker> workers(spec.num_threads);
  DispatchTrace trace;
  RowSink sink;
  constexpr std::uint64_t kNoMorsel = ~std::uint64_t{0};

  std::size_t active = workers.size();
  for (std::size_t step = 0; active > 0; ++step) {
    if (step >= max_steps) throw Error("dispatch replay did not terminate");
    const std::size_t w = step % workers.size();
    SimWorker& sw = workers[w];
    if (sw.done) continue;

    if (sw.fm) {
      sw.sm->extend_frontier(*sw.fm, w);
      sw.fm.reset();
      switch (sw.sm->check_if_frontier_finished()) {
        case BoundaryAction::kAdvanced:
          trace.events.push_back({w, sw.sm->id(), TraceAction::kAdvance});
          break;
        case BoundaryAction::kEnteredOutput:
          trace.events.push_back({w, sw.sm->id(), TraceAction::kEnterOutput});
          break;
        case BoundaryAction::kNone:
          break;
      }
      continue;
    }
    if (sw.om) {
      sw.sm->output(*sw.om, options, sink);
      sw.om.reset();
      if (sw.sm->finish_output_morsel()) {
        dispatcher.retire(*sw.sm);
        trace.events.push_back({w, sw.sm->id(), TraceAction::kRetire});
      }
      continue;
    }

    const std::size_t launched_before = dispatcher.launched();
    auto previous = sw.sm;
    sw.sm = dispatcher.grab_src_morsel_if_necessary(w, sw.sm);
    if (!sw.sm) {
      trace.events.push_back({w, kNoMorsel, TraceAction::kExit});
      sw.done = true;
      --active;
      continue;
    }
    if (dispatcher.launched() > launched_before) {
      trace.events.push_back({w, sw.sm->id(), TraceAction::kLaunch});
    } else if (sw.sm != previous) {
      trace.events.push_back({w, sw.sm->id(), TraceAction::kJoin});
    }
    if (sw.sm->phase() == Phase::kOutput) {
      sw.om = sw.sm->grab_output_morsel();
      trace.events.push_back({w, sw.sm->id(), sw.om ? TraceAction::kOutputMorsel : TraceAction::kIdle});
    } else if (sw.sm->phase() == Phase::kFrontierExtension) {
      sw.fm = sw.sm->grab_frontier_morsel();
      trace.events.push_back({w, sw.sm->id(), sw.fm ? TraceAction::kFrontierMorsel : TraceAction::kIdle});
    } else {
      trace.events.push_back({w, sw.sm->id(), TraceAction::kIdle});
    }
  }

  trace.morsels_launched = dispatcher.launched();
  trace.peak_live = dispatcher.peak_live();
  trace.result.lengths = std::move(sink.lengths);
  trace.result.paths = std::move(sink.paths);
  std::sort(trace.result.lengths.begin(), trace.result.lengths.end());
  std::sort(trace.result.paths.begin(), trace.result.paths.end());
  trace.result.stats.morsels_launched = trace.morsels_launched;
  trace.result.stats.peak_live_morsels = trace.peak_live;
  trace.result.stats.morsels = dispatcher.retired_summaries();
  return trace;
}

}  // namespace ife::oracle
