#include "treecast/network.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "test_util.h"

namespace treecast {
namespace {

using testing::Path;
using testing::Triangle;

TEST(LoadTopology, SingleLinkExpandsToBothDirections) {
  Network net = LoadTopology("0 1 1.0\n");
  ASSERT_EQ(net.num_nodes(), 2);
  ASSERT_EQ(net.num_edges(), 2);
  EXPECT_EQ(net.edge(0), (Edge{0, 1, 1.0}));
  EXPECT_EQ(net.edge(1), (Edge{1, 0, 1.0}));
  EXPECT_EQ(net.reverse(0), 1);
}

TEST(LoadTopology, CommentsBlankLinesAndDefaultCapacity) {
  Network net = LoadTopology("# header\n\n0 1   # trailing\n1 2 2.5\n");
  EXPECT_EQ(net.num_links(), 2);
  EXPECT_DOUBLE_EQ(net.edge(*net.find_edge(0, 1)).capacity, 1.0);
  EXPECT_DOUBLE_EQ(net.edge(*net.find_edge(2, 1)).capacity, 2.5);
}

TEST(LoadTopology, GScaleHasTwelveNodesAndNineteenLinks) {
  Network net = BuiltinTopology("gscale");
  EXPECT_EQ(net.num_nodes(), 12);
  EXPECT_EQ(net.num_links(), 19);
  EXPECT_EQ(net.num_edges(), 38);
}

TEST(LoadTopology, BuiltinsMatchDataFiles) {
  for (const std::string& name : BuiltinTopologyNames()) {
    Network a = BuiltinTopology(name);
    Network b = LoadTopologyFile(std::string(TREECAST_DATA_DIR) + "/" + name +
                                 ".txt");
    EXPECT_EQ(a, b) << name;
  }
}

TEST(LoadTopology, RejectsDisconnectedTriangles) {
  EXPECT_THROW(LoadTopology("0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n"), TopologyError);
}

TEST(LoadTopology, ReportsLineNumbers) {
  try {
    LoadTopology("0 1\n1 2\n2 2\n");
    FAIL() << "expected TopologyError";
  } catch (const TopologyError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  try {
    LoadTopology("0 1\nx 2\n");
    FAIL() << "expected TopologyError";
  } catch (const TopologyError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(LoadTopology, RejectsMalformedInput) {
  EXPECT_THROW(LoadTopology(""), TopologyError);
  EXPECT_THROW(LoadTopology("0 1 0\n"), TopologyError);
  EXPECT_THROW(LoadTopology("0 1 -1\n"), TopologyError);
  EXPECT_THROW(LoadTopology("0 1 abc\n"), TopologyError);
  EXPECT_THROW(LoadTopology("0 1 1 1\n"), TopologyError);
  EXPECT_THROW(LoadTopology("0 1\n1 0\n"), TopologyError);
  EXPECT_THROW(LoadTopology("0 -1\n"), TopologyError);
  EXPECT_THROW(LoadTopologyFile("/nonexistent/topology.txt"), TopologyError);
}

TEST(Network, LinkOrderDoesNotMatter) {
  Network a = Network::FromLinks(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}});
  Network b = Network::FromLinks(4, {{0, 3, 1}, {2, 1, 1}, {3, 2, 1}, {1, 0, 1}});
  EXPECT_EQ(a, b);
}

TEST(Network, OutEdgesSortedByHead) {
  Network net = GenerateRandomTopology(20, 60, 3);
  for (NodeId u = 0; u < net.num_nodes(); ++u) {
    auto out = net.out_edges(u);
    for (size_t i = 0; i < out.size(); ++i) {
      EXPECT_EQ(net.edge(out[i]).tail, u);
      if (i > 0) EXPECT_LT(net.edge(out[i - 1]).head, net.edge(out[i]).head);
    }
  }
}

TEST(RandomTopology, FiftyNodesHundredFiftyLinks) {
  Network net = GenerateRandomTopology(50, 150, 7);
  EXPECT_EQ(net.num_nodes(), 50);
  EXPECT_EQ(net.num_edges(), 300);
  EXPECT_EQ(SerializeTopology(net),
            SerializeTopology(GenerateRandomTopology(50, 150, 7)));
}

TEST(RandomTopology, SmallestInstanceIsTriangle) {
  Network net = GenerateRandomTopology(3, 3, 1);
  EXPECT_EQ(net, Triangle());
}

TEST(RandomTopology, InvariantsHoldAcrossSeeds) {
  for (uint64_t seed = 0; seed < 120; ++seed) {
    Network net = GenerateRandomTopology(50, 150, seed);
    ASSERT_EQ(net.num_links(), 150) << seed;
    std::vector<int> degree(50, 0);
    for (const Link& l : net.links()) {
      ++degree[l.u];
      ++degree[l.v];
    }
    EXPECT_GE(*std::min_element(degree.begin(), degree.end()), 2) << seed;
    DistanceMatrix d = HopDistances(net);
    for (NodeId u = 0; u < 50; ++u) {
      for (NodeId v = 0; v < 50; ++v) ASSERT_GE(d(u, v), 0) << seed;
    }
  }
}

TEST(RandomTopology, RejectsBadSizes) {
  EXPECT_THROW(GenerateRandomTopology(2, 1, 1), TopologyError);
  EXPECT_THROW(GenerateRandomTopology(10, 9, 1), TopologyError);
  EXPECT_THROW(GenerateRandomTopology(10, 46, 1), TopologyError);
}

TEST(HopDistances, TriangleAndPath) {
  DistanceMatrix t = HopDistances(Triangle());
  for (NodeId u = 0; u < 3; ++u) {
    for (NodeId v = 0; v < 3; ++v) EXPECT_EQ(t(u, v), u == v ? 0 : 1);
  }
  EXPECT_EQ(HopDistances(Path(5))(0, 4), 4);
}

DistanceMatrix FloydWarshall(const Network& net) {
  const int n = net.num_nodes();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const Edge& e : net.edges()) d[e.tail][e.head] = 1;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  DistanceMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out.at(i, j) = d[i][j];
  }
  return out;
}

TEST(HopDistances, MatchesFloydWarshall) {
  EXPECT_EQ(HopDistances(GenerateRandomTopology(50, 150, 7)),
            FloydWarshall(GenerateRandomTopology(50, 150, 7)));
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Network net = GenerateRandomTopology(12, 18, seed);
    DistanceMatrix d = HopDistances(net);
    ASSERT_EQ(d, FloydWarshall(net)) << seed;
    for (NodeId a = 0; a < 12; ++a) {
      for (NodeId b = 0; b < 12; ++b) {
        EXPECT_EQ(d(a, b), d(b, a));
        for (NodeId c = 0; c < 12; ++c) EXPECT_LE(d(a, c), d(a, b) + d(b, c));
      }
    }
  }
}

TEST(Serialize, RoundTrips) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Network net = GenerateRandomTopology(30, 70, seed);
    std::string text = SerializeTopology(net);
    Network back = LoadTopology(text);
    ASSERT_EQ(back, net) << seed;
    EXPECT_EQ(SerializeTopology(back), text);
  }
  Network odd = Network::FromLinks(3, {{0, 1, 0.1}, {1, 2, 1.0 / 3.0}, {0, 2, 7.25}});
  EXPECT_EQ(LoadTopology(SerializeTopology(odd)), odd);
}

}  // namespace
}  // namespace treecast
