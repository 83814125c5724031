// ife-bench: runs shortest-path query grids and writes CSV / SVG reports.

#include "CLI11.hpp"
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <tuple>

#include "ife/bench/grid.hpp"
#include "ife/bench/inputs.hpp"
#include "ife/bench/report.hpp"
#include "ife/bench/workload.hpp"

namespace {

constexpr int kExitCellFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string graph_path;
  std::string random;
  bool undirected = false;
  std::string policies = "ntks";
  std::string ks;
  std::string threads = "1";
  std::string sources = "1";
  std::string source_file;
  std::uint64_t seed = 42;
  std::string return_modes = "lengths";
  std::string dest_file;
  std::size_t max_paths = 0;
  std::size_t frontier_morsel = 0;
  std::size_t output_morsel = ife::SourceMorsel::kDefaultOutputChunk;
  std::size_t reps = 3;
  std::size_t warmup = 1;
  bool verify = false;
  std::string csv;
  std::string svg;
  bool level_table = false;
};

std::vector<ife::DispatchPolicy> parse_policies(const Options& o) {
  std::vector<ife::DispatchPolicy> out;
  const std::vector<std::size_t> ks = o.ks.empty() ? std::vector<std::size_t>{} : ife::bench::parse_count_list(o.ks);
  std::string_view rest = o.policies;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view name = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto probe = ife::DispatchPolicy::parse(name);
    if (ks.empty() || probe.kind == ife::PolicyKind::k1T1S || probe.kind == ife::PolicyKind::kNT1S) {
      out.push_back(probe);
      continue;
    }
    for (std::size_t k : ks) out.push_back(ife::DispatchPolicy::parse(name, k));
  }
  return out;
}

std::vector<ife::ReturnMode> parse_modes(std::string_view text) {
  std::vector<ife::ReturnMode> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view name = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (name == "lengths") {
      out.push_back(ife::ReturnMode::kLengths);
    } else if (name == "paths") {
      out.push_back(ife::ReturnMode::kPaths);
    } else {
      throw ife::InvalidArgument(fmt::format("unknown return mode '{}'", name));
    }
  }
  return out;
}

void print_summary(const ife::bench::BenchReport& report) {
  fmt::print("{:<24} {:<12} {:>7} {:>8} {:>8} {:>10} {:>6} {:>6}  {}\n", "dataset", "policy", "threads", "return",
             "sources", "mean ms", "util", "dev", "status");
  for (const auto* r : report.means()) {
    const std::string policy = r->policy == "ntks" || r->policy == "ntkms" ? fmt::format("{}(k={})", r->policy, r->k)
                                                                           : r->policy;
    fmt::print("{:<24} {:<12} {:>7} {:>8} {:>8} {:>10.1f} {:>6.2f} {:>6.2f}  {}\n", r->dataset, policy, r->threads,
               ife::bench::to_string(r->return_mode), r->num_sources, r->wall_ms, r->utilization, r->deviation,
               r->status);
  }
}

int print_level_tables(const ife::bench::BenchReport& report) {
  std::set<std::tuple<std::string, std::string, std::size_t>> printed;
  for (const auto* r : report.means()) {
    if (r->return_mode != ife::ReturnMode::kLengths || r->num_sources != 1 || r->status != "ok") continue;
    if (!printed.insert({r->dataset, r->policy, r->k}).second) continue;
    const auto runs = ife::bench::level_runs_from_report(report, *r);
    fmt::print("\n{} {} k={}\n{}", r->dataset, r->policy, r->k, ife::bench::emit_level_table(runs));
  }
  if (printed.empty()) {
    std::cerr << "ife-bench: --level-table needs a successful lengths cell with a 1-source workload\n";
    return kExitUsage;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel shortest-path query benchmark"};
  Options o;
  auto* graph_opt = app.add_option("--graph", o.graph_path, "Edge list or snapshot file");
  auto* random_opt = app.add_option("--random", o.random, "Generate a random graph N:DEG:SEED");
  graph_opt->excludes(random_opt);
  app.add_flag("--undirected", o.undirected, "Treat edges as undirected");
  app.add_option("--policy", o.policies, "Comma list of 1t1s, nt1s, ntks, ntkms")->capture_default_str();
  app.add_option("--k", o.ks, "Comma list of k values for ntks / ntkms");
  app.add_option("--threads", o.threads, "Comma list of thread counts")->capture_default_str();
  auto* sources_opt = app.add_option("--sources", o.sources, "Comma list of workload sizes")->capture_default_str();
  auto* source_file_opt = app.add_option("--source-file", o.source_file, "File of source node ids");
  sources_opt->excludes(source_file_opt);
  app.add_option("--seed", o.seed, "Workload seed")->capture_default_str();
  app.add_option("--return", o.return_modes, "lengths, paths or both")->capture_default_str();
  app.add_option("--dest-file", o.dest_file, "File of destination node ids");
  app.add_option("--max-paths", o.max_paths, "Cap on paths per (source, destination)");
  app.add_option("--frontier-morsel", o.frontier_morsel, "Frontier morsel size in nodes");
  app.add_option("--output-morsel", o.output_morsel, "Output morsel size in nodes")->capture_default_str();
  app.add_option("--reps", o.reps, "Measured runs per cell")->capture_default_str();
  app.add_option("--warmup", o.warmup, "Discarded runs per cell")->capture_default_str();
  app.add_flag("--verify", o.verify, "Check results against the serial oracle");
  app.add_option("--csv", o.csv, "Write the CSV report here ('-' for stdout)");
  app.add_option("--svg", o.svg, "Write a speedup chart here");
  app.add_flag("--level-table", o.level_table, "Print per-level times of 1-source lengths cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  ife::bench::GridConfig config;
  std::unique_ptr<ife::CsrGraph> graph;
  try {
    if (o.graph_path.empty() == o.random.empty()) throw ife::InvalidArgument("pass exactly one of --graph, --random");
    std::string name;
    if (!o.graph_path.empty()) {
      graph = std::make_unique<ife::CsrGraph>(ife::bench::load_graph_file(o.graph_path, !o.undirected));
      name = std::filesystem::path(o.graph_path).stem().string();
    } else {
      const auto spec = ife::bench::RandomGraphSpec::parse(o.random);
      graph = std::make_unique<ife::CsrGraph>(ife::bench::make_random_graph(spec, !o.undirected));
      name = spec.name();
    }
    config.datasets.push_back({name, graph.get()});

    std::vector<ife::bench::Workload> workloads;
    if (!o.source_file.empty()) {
      workloads.push_back({ife::bench::read_node_list_file(o.source_file, graph->num_nodes())});
    } else {
      for (std::size_t count : ife::bench::parse_count_list(o.sources)) {
        workloads.push_back({ife::bench::generate_sources(*graph, {.num_sources = count, .seed = o.seed})});
      }
    }
    config.workloads.push_back(std::move(workloads));
    config.policies = parse_policies(o);
    config.threads = ife::bench::parse_count_list(o.threads);
    config.return_modes = parse_modes(o.return_modes);
    if (!o.dest_file.empty()) {
      config.destinations = ife::bench::destination_mask(
          ife::bench::read_node_list_file(o.dest_file, graph->num_nodes()), graph->num_nodes());
    }
    if (o.max_paths > 0) config.max_paths_per_pair = o.max_paths;
    if (o.frontier_morsel > 0) config.frontier_morsels = {.dense = o.frontier_morsel, .sparse = o.frontier_morsel};
    if (o.output_morsel == 0) throw ife::InvalidArgument("--output-morsel must be positive");
    config.output_morsel = o.output_morsel;
    if (o.reps == 0) throw ife::InvalidArgument("--reps must be positive");
    config.repetitions = o.reps;
    config.warmup = o.warmup;
    config.verify = o.verify;
  } catch (const ife::Error& e) {
    std::cerr << "ife-bench: " << e.what() << '\n';
    return kExitUsage;
  }

  const ife::bench::BenchReport report = ife::bench::run_grid(config);

  if (o.csv == "-") {
    ife::bench::write_csv(report, std::cout);
  } else {
    print_summary(report);
    if (!o.csv.empty()) {
      std::ofstream out(o.csv, std::ios::binary);
      ife::bench::write_csv(report, out);
      if (!out) {
        std::cerr << "ife-bench: cannot write " << o.csv << '\n';
        return kExitCellFailed;
      }
    }
  }
  if (!o.svg.empty()) {
    try {
      ife::bench::emit_speedup_chart(report, o.svg);
    } catch (const ife::Error& e) {
      std::cerr << "ife-bench: " << e.what() << '\n';
      return kExitCellFailed;
    }
  }
  if (o.level_table) {
    if (const int rc = print_level_tables(report); rc != 0) return rc;
  }
  return report.any_failed() ? kExitCellFailed : 0;
}
