#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "ife/error.hpp"
#include "ife/graph.hpp"
#include "ife/oracle.hpp"
#include "ife/rng.hpp"
#include "test_graphs.hpp"

namespace ife {
namespace {

CsrGraph load(const std::string& text, bool directed = true) {
  std::istringstream in(text);
  return load_edge_list(in, {.directed = directed});
}

TEST(LoadEdgeList, EmptyStream) {
  const CsrGraph g = load("");
  EXPECT_EQ(g.num_nodes(), 0u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(LoadEdgeList, DirectedDegrees) {
  const CsrGraph g = load("0 1\n0 2\n1 2\n");
  ASSERT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 1u);
  EXPECT_EQ(g.degree(2), 0u);
}

TEST(LoadEdgeList, UndirectedKeepsDuplicates) {
  const CsrGraph g = load("0 1\n0 1\n", /*directed=*/false);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(1), 2u);
}

TEST(LoadEdgeList, CommentsBlankLinesAndSortedNeighbors) {
  const CsrGraph g = load("# header\n\n2 0\n0 3\n0 1\n  # indented comment\n0 2\t\n");
  ASSERT_EQ(g.num_nodes(), 4u);
  const auto nbrs = g.neighbors(0);
  EXPECT_EQ(std::vector<NodeId>(nbrs.begin(), nbrs.end()), (std::vector<NodeId>{1, 2, 3}));
}

TEST(LoadEdgeList, MalformedTokenReportsLine) {
  try {
    load("0 1\n1 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load("0\n"), ParseError);
  EXPECT_THROW(load("0 1 2\n"), ParseError);
  EXPECT_THROW(load("-1 2\n"), ParseError);
}

TEST(LoadEdgeList, NodeCapIsEnforced) {
  std::istringstream in("0 1\n5 9\n");
  EXPECT_THROW(load_edge_list(in, {.directed = true, .max_nodes = 8}), CapacityError);
  EXPECT_THROW(load("0 99999999999999999999999\n"), CapacityError);
}

TEST(ScanFwd, PathGraphMiddleNode) {
  const CsrGraph g = testing::path_graph(3);
  std::vector<Neighbor> got(g.scan_fwd(1).begin(), g.scan_fwd(1).end());
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].node, 2u);
  EXPECT_EQ(got[0].edge, 1u);
}

TEST(ScanFwd, IsolatedNodeIsEmpty) {
  const CsrGraph g = testing::make_graph(3, {{0, 1}});
  EXPECT_TRUE(g.scan_fwd(2).empty());
  EXPECT_EQ(g.scan_fwd(2).begin(), g.scan_fwd(2).end());
}

TEST(ScanFwd, DuplicateEdgesHaveDistinctIds) {
  const CsrGraph g = testing::make_graph(2, {{0, 1}, {0, 1}});
  std::vector<Neighbor> got(g.scan_fwd(0).begin(), g.scan_fwd(0).end());
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].node, 1u);
  EXPECT_EQ(got[1].node, 1u);
  EXPECT_NE(got[0].edge, got[1].edge);
}

TEST(CsrGraph, RejectsBrokenArrays) {
  EXPECT_THROW(CsrGraph({1, 1}, {0}, true), InvalidArgument);
  EXPECT_THROW(CsrGraph({0, 2, 1}, {0}, true), InvalidArgument);
  EXPECT_THROW(CsrGraph({0, 1}, {7}, true), InvalidArgument);
}

TEST(GenerateRandomGraph, SingleNodeNoEdges) {
  const CsrGraph g = generate_random_graph(1, 0.0, 42);
  EXPECT_EQ(g.num_nodes(), 1u);
  EXPECT_EQ(g.num_edges(), 0u);
}

TEST(GenerateRandomGraph, DeterministicAndSized) {
  const CsrGraph a = generate_random_graph(1000, 10.0, 1);
  const CsrGraph b = generate_random_graph(1000, 10.0, 1);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.num_edges(), 10000u);
  EXPECT_NE(a, generate_random_graph(1000, 10.0, 2));
}

TEST(GenerateRandomGraph, Errors) {
  EXPECT_THROW(generate_random_graph(0, 1.0, 1), InvalidArgument);
  EXPECT_THROW(generate_random_graph(10, -1.0, 1), InvalidArgument);
  EXPECT_THROW(generate_random_graph(10, 5.0, 1, /*max_edges=*/49), CapacityError);
}

// Randomized inputs against the naive multiset loader.
TEST(GraphProperties, ScanMatchesNaiveLoader) {
  Rng rng(7);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 1 + rng.below(30);
    const std::size_t m = rng.below(80);
    std::ostringstream text;
    for (std::size_t i = 0; i < m; ++i) text << rng.below(n) << ' ' << rng.below(n) << '\n';
    const bool directed = rng.below(2) == 0;
    std::istringstream in1(text.str());
    std::istringstream in2(text.str());
    const CsrGraph g = load_edge_list(in1, {.directed = directed});
    const auto naive = oracle::load_neighbor_multisets(in2, directed);
    for (NodeId u = 0; u < g.num_nodes(); ++u) {
      std::multiset<NodeId> got;
      for (const Neighbor nbr : g.scan_fwd(u)) got.insert(nbr.node);
      auto it = naive.find(u);
      EXPECT_EQ(got, it == naive.end() ? std::multiset<NodeId>{} : it->second) << "round " << round << " node " << u;
    }
    // Reserialize + reload is idempotent on the CSR arrays.
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream back(out.str());
    const CsrGraph reloaded = load_edge_list(back, {.directed = true});
    EXPECT_TRUE(std::ranges::equal(reloaded.offsets(), g.offsets()));
    EXPECT_TRUE(std::ranges::equal(reloaded.neighbor_array(), g.neighbor_array()));
  }
}

TEST(Snapshot, BitExactRoundTrip) {
  const CsrGraph g = generate_random_graph(300, 3.5, 11);
  std::ostringstream out(std::ios::binary);
  write_snapshot(out, g);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 4 + 8 + 8 + 8 * (g.num_nodes() + 1) + 8 * g.num_edges());
  EXPECT_EQ(bytes.substr(0, 4), "IFE1");
  // num_nodes, little-endian.
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 300 % 256);
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 300 / 256);
  std::istringstream in(bytes, std::ios::binary);
  EXPECT_EQ(read_snapshot(in), g);

  std::ostringstream again(std::ios::binary);
  write_snapshot(again, read_snapshot(*std::make_unique<std::istringstream>(bytes, std::ios::binary)));
  EXPECT_EQ(again.str(), bytes);
}

TEST(Snapshot, RejectsGarbage) {
  std::istringstream bad_magic("XXXX");
  EXPECT_THROW(read_snapshot(bad_magic), ParseError);
  std::istringstream truncated(std::string("IFE1\x02\0\0", 7));
  EXPECT_THROW(read_snapshot(truncated), ParseError);
}

}  // namespace
}  // namespace ife
