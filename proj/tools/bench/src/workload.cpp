#include "ife/bench/workload.hpp"

#include <deque>
#include <numeric>

#include "ife/rng.hpp"

namespace ife::bench {

namespace {

class DepthProbe {
 public:
  explicit DepthProbe(const CsrGraph& g) : g_(g), stamp_(g.num_nodes(), 0), dist_(g.num_nodes(), 0) {}

  bool reaches(NodeId s, std::uint32_t depth) {
    if (depth == 0) return true;
    ++round_;
    std::deque<NodeId> queue{s};
    stamp_[s] = round_;
    dist_[s] = 0;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (const Neighbor nbr : g_.scan_fwd(u)) {
        if (stamp_[nbr.node] == round_) continue;
        stamp_[nbr.node] = round_;
        dist_[nbr.node] = dist_[u] + 1;
        if (dist_[nbr.node] >= depth) return true;
        queue.push_back(nbr.node);
      }
    }
    return false;
  }

 private:
  const CsrGraph& g_;
  std::vector<std::uint64_t> stamp_;
  std::vector<std::uint32_t> dist_;
  std::uint64_t round_ = 0;
};

}  // namespace

bool reaches_depth(const CsrGraph& g, NodeId s, std::uint32_t depth) { return DepthProbe(g).reaches(s, depth); }

std::vector<NodeId> generate_sources(const CsrGraph& g, const WorkloadSpec& spec) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  Rng rng(spec.seed);
  DepthProbe probe(g);
  std::vector<NodeId> out;
  out.reserve(spec.num_sources);
  // Partial Fisher-Yates: position i receives a uniform pick from the rest.
  for (std::size_t i = 0; i < n && out.size() < spec.num_sources; ++i) {
    std::swap(order[i], order[i + rng.below(n - i)]);
    if (probe.reaches(order[i], spec.min_reach_depth)) out.push_back(order[i]);
  }
  if (out.size() < spec.num_sources) {
    throw WorkloadError("graph has only " + std::to_string(out.size()) + " nodes reaching depth " +
                        std::to_string(spec.min_reach_depth) + ", " + std::to_string(spec.num_sources) +
                        " sources requested");
  }
  return out;
}

}  // namespace ife::bench
