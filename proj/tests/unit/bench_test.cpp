#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ife/bench/grid.hpp"
#include "ife/bench/inputs.hpp"
#include "ife/bench/report.hpp"
#include "ife/bench/workload.hpp"
#include "ife/oracle.hpp"
#include "test_graphs.hpp"

#ifndef IFE_GOLDEN_DIR
#error "IFE_GOLDEN_DIR must point at tests/golden"
#endif

namespace ife::bench {
namespace {

using testing::path_graph;
using testing::star_graph;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(GenerateSources, PathGraphDepthArithmetic) {
  const CsrGraph g = path_graph(10);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = generate_sources(g, {.num_sources = 1, .seed = seed});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_LE(s[0], 6u);
  }
  EXPECT_EQ(generate_sources(g, {.num_sources = 7, .seed = 1}).size(), 7u);
  EXPECT_THROW(generate_sources(g, {.num_sources = 8, .seed = 1}), WorkloadError);
}

TEST(GenerateSources, SameSeedSameTable) {
  const CsrGraph g = generate_random_graph(500, 4.0, 3);
  const auto a = generate_sources(g, {.num_sources = 64, .seed = 9});
  EXPECT_EQ(a, generate_sources(g, {.num_sources = 64, .seed = 9}));
  EXPECT_NE(a, generate_sources(g, {.num_sources = 64, .seed = 10}));
  std::set<NodeId> distinct(a.begin(), a.end());
  EXPECT_EQ(distinct.size(), a.size());
  for (NodeId s : a) EXPECT_TRUE(reaches_depth(g, s, 3));
}

TEST(GenerateSources, StarGraphHasNoDeepSource) {
  EXPECT_THROW(generate_sources(star_graph(20), {.num_sources = 1, .seed = 1}), WorkloadError);
}

TEST(ReachesDepth, MatchesOracleDistances) {
  const CsrGraph g = generate_random_graph(200, 1.2, 4);
  const auto adj = oracle::AdjacencyMap::from_graph(g);
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    const auto dist = oracle::bfs_distances(adj, s);
    std::uint32_t ecc = 0;
    for (const auto& d : dist) {
      if (d) ecc = std::max(ecc, *d);
    }
    for (std::uint32_t depth = 0; depth < 6; ++depth) ASSERT_EQ(reaches_depth(g, s, depth), ecc >= depth) << s;
  }
}

GridConfig tiny_config(const CsrGraph& g) {
  GridConfig c;
  c.datasets.push_back({"tiny", &g});
  c.workloads.push_back({Workload{{0}}});
  c.policies.push_back(DispatchPolicy::parse("1t1s"));
  c.repetitions = 3;
  c.warmup = 1;
  c.verify = true;
  return c;
}

TEST(RunGrid, SingleCellRowsAndMean) {
  const CsrGraph g = path_graph(5);
  const auto report = run_grid(tiny_config(g));
  ASSERT_EQ(report.rows.size(), 5u);
  EXPECT_EQ(report.rows[0].type, RowType::kWarmup);
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(report.rows[i].type, RowType::kRun);
    EXPECT_EQ(report.rows[i].run, static_cast<std::size_t>(i - 1));
  }
  const BenchRow& mean = report.rows[4];
  EXPECT_EQ(mean.type, RowType::kMean);
  EXPECT_EQ(mean.status, "ok");
  EXPECT_FALSE(report.any_failed());
  EXPECT_EQ(mean.level_sizes, (std::vector<std::size_t>{1, 1, 1, 1, 1}));
  // Aggregates are recomputable from the measured rows.
  double sum = 0, lo = 1e300, hi = 0;
  for (int i = 1; i <= 3; ++i) {
    sum += report.rows[i].wall_ms;
    lo = std::min(lo, report.rows[i].wall_ms);
    hi = std::max(hi, report.rows[i].wall_ms);
  }
  EXPECT_DOUBLE_EQ(mean.wall_ms, sum / 3);
  EXPECT_DOUBLE_EQ(mean.deviation, (hi - lo) / (sum / 3));
}

TEST(RunGrid, CellErrorsBecomeStatus) {
  const CsrGraph deep = path_graph(300);
  GridConfig c = tiny_config(deep);
  c.policies.push_back(DispatchPolicy::parse("ntkms"));
  c.memory_limit_bytes = 300 * 88 - 1;
  const auto report = run_grid(c);
  const auto means = report.means();
  ASSERT_EQ(means.size(), 2u);
  EXPECT_EQ(means[0]->status, "depth-overflow");
  EXPECT_EQ(means[1]->status, "out-of-memory");
  EXPECT_TRUE(report.any_failed());
}

TEST(VerifyResult, DetectsTamperedRows) {
  const CsrGraph g = testing::diamond_graph();
  QuerySpec spec;
  spec.graph = &g;
  spec.sources = {0};
  auto result = run_query(spec);
  EXPECT_EQ(verify_result(spec, result), "ok");
  result.lengths.back().length += 1;
  EXPECT_NE(verify_result(spec, result), "ok");

  spec.return_mode = ReturnMode::kPaths;
  result = run_query(spec);
  EXPECT_EQ(verify_result(spec, result), "ok");
  result.paths.pop_back();
  EXPECT_NE(verify_result(spec, result), "ok");
  result = run_query(spec);
  result.paths.push_back(result.paths.back());
  EXPECT_NE(verify_result(spec, result), "ok");
}

TEST(WriteCsv, HeaderQuotingAndIntegerTimes) {
  BenchReport report;
  BenchRow row;
  row.dataset = "a,\"b\"";
  row.policy = "ntks";
  row.k = 32;
  row.threads = 2;
  row.num_sources = 8;
  row.wall_ms = 12.6;
  row.utilization = 0.5;
  row.level_sizes = {1, 7};
  row.level_ms = {0.4, 11.5};
  report.rows.push_back(row);
  row.type = RowType::kMean;
  row.deviation = 0.25;
  row.status = "error: x, y";
  report.rows.push_back(row);
  std::ostringstream out;
  write_csv(report, out);
  EXPECT_EQ(out.str(),
            "dataset,policy,k,threads,return_mode,sources,row_type,run,status,wall_ms,utilization,deviation,"
            "level_sizes,level_ms\r\n"
            "\"a,\"\"b\"\"\",ntks,32,2,lengths,8,run,0,ok,13,0.500,,1;7,0;12\r\n"
            "\"a,\"\"b\"\"\",ntks,32,2,lengths,8,mean,0,\"error: x, y\",13,0.500,0.250,1;7,0;12\r\n");
}

TEST(WriteCsv, DeterministicApartFromTimings) {
  const CsrGraph g = generate_random_graph(300, 3.0, 2);
  GridConfig c = tiny_config(g);
  c.workloads = {{Workload{generate_sources(g, {.num_sources = 8, .seed = 5})}}};
  c.policies = {DispatchPolicy::parse("ntks", 4), DispatchPolicy::parse("ntkms", 1)};
  auto strip = [](const BenchReport& r) {
    std::ostringstream out;
    write_csv(r, out);
    // Drop wall_ms, utilization, deviation and level_ms.
    std::string kept;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
      std::vector<std::string> f;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) f.push_back(cell);
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (i != 9 && i != 10 && i != 11 && i != 13) kept += f[i] + "|";
      }
      kept += "\n";
    }
    return kept;
  };
  EXPECT_EQ(strip(run_grid(c)), strip(run_grid(c)));
}

TEST(LevelTable, SourceOnlyRun) {
  const std::vector<LevelRun> runs{{1, {{0, 1, 0}}}};
  EXPECT_EQ(emit_level_table(runs),
            "level  frontier  1T ms\n"
            "    0         1    0.0\n"
            "total         1    0.0\n");
}

TEST(LevelTable, ThreeLevelsTwoThreadCounts) {
  const std::vector<LevelRun> runs{
      {1, {{0, 1, 100'000}, {1, 16, 2'000'000}, {2, 300, 35'260'000}}},
      {8, {{0, 1, 200'000}, {1, 16, 1'000'000}, {2, 300, 5'000'000}}},
  };
  EXPECT_EQ(emit_level_table(runs),
            "level  frontier  1T ms  8T ms\n"
            "    0         1    0.1    0.2\n"
            "    1        16    2.0    1.0\n"
            "    2       300   35.3    5.0\n"
            "total       317   37.4    6.2\n");
}

TEST(LevelTable, ManyLevelsWidenColumns) {
  LevelRun run{2, {}};
  for (std::uint32_t i = 0; i < 12; ++i) run.levels.push_back({i, std::size_t{1} << i, 1'000'000});
  const std::vector<LevelRun> runs{run};
  const std::string table = emit_level_table(runs);
  std::istringstream lines(table);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  ASSERT_EQ(all.size(), 14u);
  EXPECT_EQ(all[0], "level  frontier  2T ms");
  EXPECT_EQ(all[11], "   10      1024    1.0");
  EXPECT_EQ(all[13], "total      4095   12.0");
  for (const auto& l : all) EXPECT_EQ(l.size(), all[0].size());
}

BenchRow mean_row(std::string policy, std::size_t k, std::size_t threads, double ms) {
  BenchRow r;
  r.dataset = "g";
  r.policy = std::move(policy);
  r.k = k;
  r.threads = threads;
  r.num_sources = 64;
  r.type = RowType::kMean;
  r.wall_ms = ms;
  return r;
}

BenchReport four_policy_report() {
  BenchReport report;
  const std::pair<const char*, std::size_t> policies[] = {{"1t1s", 1}, {"nt1s", 1}, {"ntks", 32}, {"ntkms", 4}};
  const double base[] = {800, 900, 1000, 400};
  const double speedup[][4] = {{1, 1.9, 3.6, 6.4}, {1, 1.5, 2.0, 2.4}, {1, 2, 4, 7.5}, {1, 1.8, 3.2, 5.0}};
  const std::size_t threads[] = {1, 2, 4, 8};
  for (int p = 0; p < 4; ++p) {
    for (int t = 0; t < 4; ++t) {
      report.rows.push_back(mean_row(policies[p].first, policies[p].second, threads[t], base[p] / speedup[p][t]));
    }
  }
  return report;
}

TEST(SpeedupChart, SeriesAreRelativeToOneThread) {
  const auto series = speedup_series(four_policy_report());
  ASSERT_EQ(series.size(), 4u);
  EXPECT_EQ(series[2].label, "ntks(k=32)");
  ASSERT_EQ(series[2].points.size(), 4u);
  EXPECT_DOUBLE_EQ(series[2].points[3].speedup, 7.5);
  EXPECT_EQ(series[2].points[3].threads, 8u);
  EXPECT_DOUBLE_EQ(series[1].points[2].speedup, 2.0);
}

TEST(SpeedupChart, OnePolicyOnePoint) {
  BenchReport report;
  report.rows.push_back(mean_row("nt1s", 1, 4, 10));
  const std::string svg = render_speedup_svg(report);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"260.0,30.0\"/>"),
            std::string::npos);
  EXPECT_NE(svg.find(">nt1s</text>"), std::string::npos);
}

TEST(SpeedupChart, FourPolicyGoldenFile) {
  const std::string svg = render_speedup_svg(four_policy_report());
  EXPECT_EQ(svg, render_speedup_svg(four_policy_report()));
  const auto golden = std::filesystem::path(IFE_GOLDEN_DIR) / "speedup_four_policies.svg";
  if (std::getenv("IFE_UPDATE_GOLDEN") != nullptr) std::ofstream(golden, std::ios::binary) << svg;
  EXPECT_EQ(svg, read_file(golden));
}

TEST(SpeedupChart, PolylinePointsFollowSpeedups) {
  // Plot area: x from 60 to 460 over 4 thread counts, y from 380-50=350 (0) to 30 (y max 8).
  const std::string svg = render_speedup_svg(four_policy_report());
  std::regex poly("points=\"([^\"]+)\"");
  std::vector<std::string> lines;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    lines.push_back((*it)[1]);
  }
  ASSERT_EQ(lines.size(), 4u);
  const double speedup[][4] = {{1, 1.9, 3.6, 6.4}, {1, 1.5, 2.0, 2.4}, {1, 2, 4, 7.5}, {1, 1.8, 3.2, 5.0}};
  for (int p = 0; p < 4; ++p) {
    std::string expect;
    for (int t = 0; t < 4; ++t) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%.1f,%.1f", t == 0 ? "" : " ", 60 + 400.0 * t / 3, 350 - 320 * speedup[p][t] / 8);
      expect += buf;
    }
    EXPECT_EQ(lines[p], expect) << p;
  }
}

TEST(SpeedupChart, EmptyReportIsRefused) {
  EXPECT_THROW(render_speedup_svg(BenchReport{}), ReportError);
  BenchReport failed;
  failed.rows.push_back(mean_row("ntks", 32, 1, 5));
  failed.rows.back().status = "out-of-memory";
  EXPECT_THROW(render_speedup_svg(failed), ReportError);
}

TEST(SpeedupChart, WriteFailureThrows) {
  EXPECT_THROW(emit_speedup_chart(four_policy_report(), "/nonexistent-dir/chart.svg"), Error);
}

TEST(Inputs, RandomSpecAndLists) {
  const auto spec = RandomGraphSpec::parse("1000:8:3");
  EXPECT_EQ(spec.num_nodes, 1000u);
  EXPECT_DOUBLE_EQ(spec.avg_degree, 8.0);
  EXPECT_EQ(spec.seed, 3u);
  EXPECT_EQ(spec.name(), "random-1000-8-3");
  EXPECT_THROW(RandomGraphSpec::parse("1000:8"), InvalidArgument);
  EXPECT_THROW(RandomGraphSpec::parse("x:8:1"), InvalidArgument);
  EXPECT_EQ(parse_count_list("1,2,8"), (std::vector<std::size_t>{1, 2, 8}));
  EXPECT_THROW(parse_count_list("1,,2"), InvalidArgument);
  EXPECT_THROW(parse_count_list("0"), InvalidArgument);
}

TEST(Inputs, NodeListAndMask) {
  std::istringstream in("# sources\n3 1\n\n0\n");
  EXPECT_EQ(read_node_list(in, 4), (std::vector<NodeId>{3, 1, 0}));
  std::istringstream bad("9\n");
  EXPECT_THROW(read_node_list(bad, 4), InvalidArgument);
  EXPECT_EQ(destination_mask({2}, 3), (std::vector<std::uint8_t>{0, 0, 1}));
}

TEST(Inputs, UndirectedRandomGraphIsSymmetric) {
  const CsrGraph g = make_random_graph({50, 2.0, 1}, false);
  const CsrGraph d = make_random_graph({50, 2.0, 1}, true);
  EXPECT_EQ(g.num_edges(), 2 * d.num_edges());
}

TEST(Inputs, LoadsEdgeListsAndSnapshots) {
  const auto dir = std::filesystem::temp_directory_path() / "ife_bench_test";
  std::filesystem::create_directories(dir);
  const CsrGraph g = generate_random_graph(40, 3.0, 8);
  {
    std::ofstream text(dir / "g.txt");
    write_edge_list(text, g);
    std::ofstream bin(dir / "g.snap", std::ios::binary);
    write_snapshot(bin, g);
  }
  EXPECT_EQ(load_graph_file(dir / "g.txt", true).num_edges(), g.num_edges());
  EXPECT_TRUE(load_graph_file(dir / "g.snap", true) == g);
  EXPECT_THROW(load_graph_file(dir / "missing.txt", true), InvalidArgument);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace ife::bench
