#include "ife/bench/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "ife/oracle.hpp"

namespace ife::bench {

namespace {

std::string status_of(const Error& e) {
  if (dynamic_cast<const OutOfMemoryError*>(&e) != nullptr) return "out-of-memory";
  if (dynamic_cast<const DepthOverflowError*>(&e) != nullptr) return "depth-overflow";
  return std::string("error: ") + e.what();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

long long whole_ms(double ms) { return std::llround(ms); }

template <class T, class F>
std::string joined(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) out += ';';
    out += f(xs[i]);
  }
  return out;
}

bool is_walk(const CsrGraph& g, const PathRow& row) {
  const auto& p = row.path;
  if (p.empty() || p.size() % 2 == 0 || p.front() != row.source || p.back() != row.destination) return false;
  for (std::size_t i = 0; i + 2 < p.size(); i += 2) {
    bool found = false;
    for (const Neighbor nbr : g.scan_fwd(p[i])) {
      if (nbr.edge == p[i + 1] && nbr.node == p[i + 2]) found = true;
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

bool BenchReport::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const BenchRow& r) { return r.status != "ok"; });
}

std::vector<const BenchRow*> BenchReport::means() const {
  std::vector<const BenchRow*> out;
  for (const auto& r : rows) {
    if (r.type == RowType::kMean) out.push_back(&r);
  }
  return out;
}

std::string_view to_string(RowType type) {
  switch (type) {
    case RowType::kWarmup:
      return "warmup";
    case RowType::kRun:
      return "run";
    case RowType::kMean:
      break;
  }
  return "mean";
}

std::string_view to_string(ReturnMode mode) { return mode == ReturnMode::kLengths ? "lengths" : "paths"; }

std::string verify_result(const QuerySpec& spec, const QueryResult& result) {
  const CsrGraph& g = *spec.graph;
  const auto expected = oracle::expected_length_rows(g, spec.sources, spec.destinations);
  if (spec.return_mode == ReturnMode::kLengths) {
    if (result.lengths == expected) return "ok";
    return fmt::format("mismatch: {} length rows, oracle has {}", result.lengths.size(), expected.size());
  }
  // Every path must be a real walk of oracle length, and each expected pair needs a path.
  std::multiset<std::pair<NodeId, NodeId>> pairs;
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> dist;
  for (const auto& r : expected) dist[{r.source, r.destination}] = r.length;
  for (const auto& row : result.paths) {
    auto it = dist.find({row.source, row.destination});
    if (it == dist.end() || row.length() != it->second || !is_walk(g, row)) {
      return fmt::format("mismatch: bad path from {} to {}", row.source, row.destination);
    }
    pairs.insert({row.source, row.destination});
  }
  for (const auto& r : expected) {
    if (!pairs.contains({r.source, r.destination})) {
      return fmt::format("mismatch: no path from {} to {}", r.source, r.destination);
    }
  }
  if (g.num_nodes() <= oracle::kExhaustiveLimit && !spec.max_paths_per_pair) {
    std::map<std::pair<NodeId, NodeId>, std::set<oracle::Path>> got;
    for (const auto& row : result.paths) got[{row.source, row.destination}].insert(row.path);
    for (const auto& r : expected) {
      if (got[{r.source, r.destination}] != oracle::brute_force_all_shortest_paths(g, r.source, r.destination)) {
        return fmt::format("mismatch: path set from {} to {}", r.source, r.destination);
      }
    }
    // Duplicate sources emit duplicate rows.
    std::size_t expected_rows = 0;
    for (const auto& r : expected) expected_rows += got[{r.source, r.destination}].size();
    if (expected_rows != result.paths.size()) return "mismatch: duplicate paths";
  }
  return "ok";
}

BenchRow aggregate(const std::vector<BenchRow>& runs) {
  BenchRow mean = runs.front();
  mean.type = RowType::kMean;
  mean.run = 0;
  mean.wall_ms = 0;
  mean.utilization = 0;
  mean.level_ms.assign(runs.front().level_ms.size(), 0.0);
  double lo = runs.front().wall_ms;
  double hi = lo;
  for (const auto& r : runs) {
    if (r.status != "ok" && mean.status == "ok") mean.status = r.status;
    mean.wall_ms += r.wall_ms;
    mean.utilization += r.utilization;
    lo = std::min(lo, r.wall_ms);
    hi = std::max(hi, r.wall_ms);
    for (std::size_t i = 0; i < std::min(r.level_ms.size(), mean.level_ms.size()); ++i) mean.level_ms[i] += r.level_ms[i];
  }
  const auto count = static_cast<double>(runs.size());
  mean.wall_ms /= count;
  mean.utilization /= count;
  for (auto& ms : mean.level_ms) ms /= count;
  mean.deviation = mean.wall_ms > 0 ? (hi - lo) / mean.wall_ms : 0.0;
  return mean;
}

BenchReport run_grid(const GridConfig& config) {
  if (config.repetitions == 0) throw InvalidArgument("at least one repetition is required");
  if (config.workloads.size() != 1 && config.workloads.size() != config.datasets.size()) {
    throw InvalidArgument("need one workload list per dataset");
  }
  BenchReport report;
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    const Dataset& ds = config.datasets[d];
    const auto& workloads = config.workloads.size() == 1 ? config.workloads[0] : config.workloads[d];
    for (const Workload& wl : workloads) {
      for (ReturnMode mode : config.return_modes) {
        for (const DispatchPolicy& policy : config.policies) {
          for (std::size_t threads : config.threads) {
            QuerySpec spec;
            spec.graph = ds.graph;
            spec.sources = wl.sources;
            spec.destinations = config.destinations;
            spec.return_mode = mode;
            spec.policy = policy;
            spec.num_threads = threads;
            spec.frontier_morsels = config.frontier_morsels;
            spec.output_morsel = config.output_morsel;
            spec.max_paths_per_pair = config.max_paths_per_pair;
            spec.memory_limit_bytes = config.memory_limit_bytes;

            BenchRow base;
            base.dataset = ds.name;
            base.policy = std::string(policy.name());
            base.k = policy.k;
            base.threads = threads;
            base.return_mode = mode;
            base.num_sources = wl.sources.size();

            std::vector<BenchRow> measured;
            bool verified = !config.verify;
            for (std::size_t i = 0; i < config.warmup + config.repetitions; ++i) {
              BenchRow row = base;
              const bool warm = i < config.warmup;
              row.type = warm ? RowType::kWarmup : RowType::kRun;
              row.run = warm ? i : i - config.warmup;
              try {
                const QueryResult result = run_query(spec);
                row.wall_ms = static_cast<double>(result.stats.wall_nanos) / 1e6;
                row.utilization = result.stats.utilization();
                for (const LevelStat& lvl : result.stats.merged_levels()) {
                  row.level_sizes.push_back(lvl.frontier_size);
                  row.level_ms.push_back(static_cast<double>(lvl.nanos) / 1e6);
                }
                if (!verified) {
                  row.status = verify_result(spec, result);
                  verified = true;
                }
              } catch (const Error& e) {
                row.status = status_of(e);
              }
              const bool failed = row.status != "ok";
              if (warm) {
                report.rows.push_back(row);
              } else {
                measured.push_back(row);
              }
              // Errors are deterministic; repeating the cell would only repeat them.
              if (failed) break;
            }
            if (measured.empty()) {
              // Failed during warmup: report the failure as the cell's only run.
              BenchRow row = report.rows.back();
              row.type = RowType::kRun;
              row.run = 0;
              measured.push_back(row);
            }
            report.rows.insert(report.rows.end(), measured.begin(), measured.end());
            report.rows.push_back(aggregate(measured));
          }
        }
      }
    }
  }
  return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
  out << "dataset,policy,k,threads,return_mode,sources,row_type,run,status,wall_ms,utilization,deviation,"
         "level_sizes,level_ms\r\n";
  for (const auto& r : report.rows) {
    out << csv_field(r.dataset) << ',' << r.policy << ',' << r.k << ',' << r.threads << ',' << to_string(r.return_mode)
        << ',' << r.num_sources << ',' << to_string(r.type) << ',' << r.run << ',' << csv_field(r.status) << ','
        << whole_ms(r.wall_ms) << ',' << fmt::format("{:.3f}", r.utilization) << ','
        << (r.type == RowType::kMean ? fmt::format("{:.3f}", r.deviation) : std::string()) << ','
        << joined(r.level_sizes, [](std::size_t s) { return std::to_string(s); }) << ','
        << joined(r.level_ms, [](double ms) { return std::to_string(whole_ms(ms)); }) << "\r\n";
  }
}

}  // namespace ife::bench
