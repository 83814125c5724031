#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "ife/engine.hpp"
#include "ife/oracle.hpp"
#include "ife/rng.hpp"
#include "test_graphs.hpp"

namespace ife {
namespace {

using testing::cycle4;
using testing::diamond_graph;
using testing::path_graph;

QuerySpec spec_for(const CsrGraph& g, std::vector<NodeId> sources, std::string_view policy = "ntks",
                   std::size_t threads = 1, ReturnMode mode = ReturnMode::kLengths) {
  QuerySpec s;
  s.graph = &g;
  s.sources = std::move(sources);
  s.policy = DispatchPolicy::parse(policy);
  s.num_threads = threads;
  s.return_mode = mode;
  return s;
}

TEST(RunQuery, PathGraphLengths) {
  const CsrGraph g = path_graph(3);
  const auto r = run_query(spec_for(g, {0}));
  EXPECT_EQ(r.lengths, (std::vector<LengthRow>{{0, 0, 0}, {0, 1, 1}, {0, 2, 2}}));
  EXPECT_TRUE(r.paths.empty());
}

TEST(RunQuery, DestinationMask) {
  const CsrGraph g = path_graph(3);
  auto s = spec_for(g, {0});
  s.destinations = {0, 0, 1};
  EXPECT_EQ(run_query(s).lengths, (std::vector<LengthRow>{{0, 2, 2}}));
}

TEST(RunQuery, DiamondHasTwoShortestPaths) {
  const CsrGraph g = diamond_graph();
  for (std::string_view policy : {"1t1s", "nt1s", "ntks", "ntkms"}) {
    auto s = spec_for(g, {0}, policy, 2, ReturnMode::kPaths);
    s.destinations = {0, 0, 0, 1};
    const auto r = run_query(s);
    ASSERT_EQ(r.paths.size(), 2u) << policy;
    EXPECT_EQ(r.paths[0].path, (std::vector<std::uint64_t>{0, 0, 1, 2, 3}));
    EXPECT_EQ(r.paths[1].path, (std::vector<std::uint64_t>{0, 1, 2, 3, 3}));
    EXPECT_EQ(r.paths[0].length(), 2u);
  }
}

TEST(RunQuery, PathCapKeepsLeastPath) {
  const CsrGraph g = diamond_graph();
  for (std::string_view policy : {"ntks", "ntkms"}) {
    auto s = spec_for(g, {0}, policy, 1, ReturnMode::kPaths);
    s.destinations = {0, 0, 0, 1};
    s.max_paths_per_pair = 1;
    const auto r = run_query(s);
    ASSERT_EQ(r.paths.size(), 1u);
    EXPECT_EQ(r.paths[0].path, (std::vector<std::uint64_t>{0, 0, 1, 2, 3}));
  }
}

TEST(RunQuery, SourceToItselfIsTheEmptyPath) {
  const CsrGraph g = diamond_graph();
  auto s = spec_for(g, {2}, "ntks", 1, ReturnMode::kPaths);
  const auto r = run_query(s);
  ASSERT_EQ(r.paths.size(), 2u);
  EXPECT_EQ(r.paths[0], (PathRow{2, 2, {2}}));
  EXPECT_EQ(r.paths[1], (PathRow{2, 3, {2, 3, 3}}));
}

TEST(RunQuery, MatchesOracleOnRandomGraph) {
  const CsrGraph g = generate_random_graph(200, 4.0, 7);
  Rng rng(7);
  std::vector<NodeId> sources(10);
  for (auto& s : sources) s = rng.below(200);
  const auto expect = oracle::expected_length_rows(g, sources);
  for (std::string_view policy : {"1t1s", "nt1s", "ntks", "ntkms"}) {
    for (std::size_t threads : {1u, 3u}) {
      EXPECT_EQ(run_query(spec_for(g, sources, policy, threads)).lengths, expect) << policy << " " << threads;
    }
  }
}

TEST(RunQuery, PathsAgreeAcrossPoliciesAndThreads) {
  const CsrGraph g = generate_random_graph(150, 3.0, 11);
  const std::vector<NodeId> sources{1, 5, 9, 13};
  auto base = spec_for(g, sources, "1t1s", 1, ReturnMode::kPaths);
  base.max_paths_per_pair = 50;
  const auto expect = run_query(base).paths;
  ASSERT_FALSE(expect.empty());
  for (std::string_view policy : {"nt1s", "ntks", "ntkms"}) {
    for (std::size_t threads : {2u, 4u}) {
      auto s = spec_for(g, sources, policy, threads, ReturnMode::kPaths);
      s.max_paths_per_pair = 50;
      s.frontier_morsels = {.dense = 8, .sparse = 4};
      EXPECT_EQ(run_query(s).paths, expect) << policy << " " << threads;
    }
  }
}

TEST(RunQuery, DuplicateSourcesAreKept) {
  const CsrGraph g = path_graph(2);
  EXPECT_EQ(run_query(spec_for(g, {0, 0}, "ntkms")).lengths,
            (std::vector<LengthRow>{{0, 0, 0}, {0, 0, 0}, {0, 1, 1}, {0, 1, 1}}));
}

TEST(RunQuery, DepthOverflowAbortsTheQuery) {
  const CsrGraph g = path_graph(300);
  for (std::string_view policy : {"ntks", "ntkms"}) {
    for (ReturnMode mode : {ReturnMode::kLengths, ReturnMode::kPaths}) {
      EXPECT_THROW(run_query(spec_for(g, {0}, policy, 2, mode)), DepthOverflowError);
    }
  }
  const CsrGraph ok = path_graph(255);
  const auto r = run_query(spec_for(ok, {0}));
  EXPECT_EQ(r.lengths.back(), (LengthRow{0, 254, 254}));
}

TEST(RunQuery, MemoryLimitRaisesOutOfMemory) {
  const CsrGraph g = testing::star_graph(999);
  auto s = spec_for(g, {0}, "ntkms", 1);
  s.memory_limit_bytes = 1000 * 88 - 1;
  EXPECT_THROW(run_query(s), OutOfMemoryError);
  s.memory_limit_bytes = 1000 * 88;
  EXPECT_NO_THROW(run_query(s));
}

TEST(RunQuery, RejectsBadSpecs) {
  const CsrGraph g = path_graph(3);
  auto s = spec_for(g, {3});
  EXPECT_THROW(run_query(s), InvalidArgument);
  s = spec_for(g, {0});
  s.num_threads = 0;
  EXPECT_THROW(run_query(s), InvalidArgument);
  s = spec_for(g, {0});
  s.destinations = {1};
  EXPECT_THROW(run_query(s), InvalidArgument);
  s = spec_for(g, {0});
  s.max_paths_per_pair = 0;
  EXPECT_THROW(run_query(s), InvalidArgument);
  s.graph = nullptr;
  EXPECT_THROW(run_query(s), InvalidArgument);
}

TEST(RunQuery, NoSourcesYieldsNoRows) {
  const CsrGraph g = path_graph(3);
  const auto r = run_query(spec_for(g, {}, "ntks", 2));
  EXPECT_TRUE(r.lengths.empty());
  EXPECT_EQ(r.stats.morsels_launched, 0u);
}

TEST(RunQuery, StatsDescribeTheRun) {
  const CsrGraph g = path_graph(5);
  const auto r = run_query(spec_for(g, {0, 1, 2}, "ntks", 2));
  EXPECT_EQ(r.stats.morsels_launched, 3u);
  EXPECT_EQ(r.stats.busy_nanos.size(), 2u);
  ASSERT_EQ(r.stats.morsels.size(), 3u);
  const auto levels = r.stats.merged_levels();
  ASSERT_EQ(levels.size(), 5u);
  EXPECT_EQ(levels[0].frontier_size, 3u);
  EXPECT_EQ(levels[4].frontier_size, 1u);
  EXPECT_GE(r.stats.utilization(), 0.0);
  EXPECT_LE(r.stats.utilization(), 1.0);
  EXPECT_GT(r.stats.peak_memory_bytes, 0u);
}

TEST(SerialIfeOracle, UndirectedCycle) {
  const auto r = serial_ife_oracle(cycle4(), 0);
  EXPECT_EQ(r.dist, (std::vector<std::uint32_t>{0, 1, 2, 1}));
  EXPECT_EQ(r.level_sizes, (std::vector<std::size_t>{1, 2, 1}));
  ASSERT_EQ(r.parents[2].size(), 2u);
  EXPECT_EQ(r.parents[2][0].parent, 1u);
  EXPECT_EQ(r.parents[2][1].parent, 3u);
}

TEST(SerialIfeOracle, AgreesWithQueueBfs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CsrGraph g = generate_random_graph(120, 1.5 + static_cast<double>(seed % 4), seed);
    const auto adj = oracle::AdjacencyMap::from_graph(g);
    const auto bfs = oracle::bfs_distances(adj, 0);
    const auto ife = serial_ife_oracle(g, 0);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      ASSERT_EQ(ife.dist[v], bfs[v] ? *bfs[v] : kNoDistance);
    }
  }
}

TEST(EnumerateShortestPaths, CapAndOrder) {
  // Two parents at each of two levels: 4 paths from 0 to 5.
  const std::vector<std::vector<ParentEdge>> parents{{}, {{0, 10}}, {{0, 11}}, {{1, 12}, {2, 13}}, {}, {{3, 14}}};
  const ParentsFn fn = [&](NodeId v) { return v < parents.size() ? parents[v] : std::vector<ParentEdge>{}; };
  std::vector<std::vector<std::uint64_t>> out;
  enumerate_shortest_paths(0, 5, 3, fn, std::nullopt, [&](auto&& p) { out.push_back(p); });
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0], (std::vector<std::uint64_t>{0, 10, 1, 12, 3, 14, 5}));
  EXPECT_EQ(out[1], (std::vector<std::uint64_t>{0, 11, 2, 13, 3, 14, 5}));
  out.clear();
  enumerate_shortest_paths(0, 5, 3, fn, 1, [&](auto&& p) { out.push_back(p); });
  EXPECT_EQ(out.size(), 1u);
}

}  // namespace
}  // namespace ife
