#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tcs/errors.hpp"
#include "tcs/graphs.hpp"
#include "tcs/transport.hpp"

using namespace tcs;

TEST(Laakso, CountsMatchRecurrence) {
  for (int n = 0; n <= 5; ++n) {
    auto g = build_laakso(n);
    auto c = oracle::laakso_counts(n);
    EXPECT_EQ(g.edge_count(), c.edges) << n;
    EXPECT_EQ(g.vertex_count(), c.vertices) << n;
  }
}

TEST(Laakso, SmallExamples) {
  auto g0 = build_laakso(0);
  EXPECT_EQ(g0.vertex_count(), 2u);
  EXPECT_EQ(g0.edge_count(), 1u);
  EXPECT_EQ(build_laakso(1).vertex_count(), 6u);
  auto g2 = build_laakso(2);
  EXPECT_EQ(g2.vertex_count(), 30u);
  EXPECT_EQ(g2.edge_count(), 36u);
}

TEST(Diamond, CountsMatchRecurrence) {
  for (int k = 2; k <= 4; ++k)
    for (int n = 1; n <= 4; ++n) {
      auto g = build_diamond(n, k);
      auto c = oracle::diamond_counts(n, k);
      EXPECT_EQ(g.edge_count(), c.edges);
      EXPECT_EQ(g.vertex_count(), c.vertices);
    }
  auto d = build_diamond(2, 3);
  EXPECT_EQ(d.edge_count(), 36u);
  EXPECT_EQ(d.vertex_count(), 23u);
  EXPECT_EQ(build_diamond(1, 2).vertex_count(), 4u);
}

TEST(Laakso, L1Layout) {
  auto g = build_laakso(1);
  // A bottom, F top, B C right path, D E left path
  EXPECT_EQ(g.edge(0).tail, g.bottom());
  EXPECT_EQ(g.edge(5).head, g.top());
  EXPECT_EQ(g.edge(0).head, g.edge(1).tail);
  EXPECT_EQ(g.edge(0).head, g.edge(3).tail);
  EXPECT_EQ(g.edge(1).head, g.edge(2).tail);
  EXPECT_EQ(g.edge(3).head, g.edge(4).tail);
  EXPECT_EQ(g.edge(2).head, g.edge(5).tail);
  EXPECT_EQ(g.edge(4).head, g.edge(5).tail);
}

TEST(Laakso, DegreesAndConnectivity) {
  auto g = build_laakso(3);
  std::vector<int> deg(g.vertex_count());
  for (const auto& e : g.edges()) ++deg[e.tail], ++deg[e.head];
  EXPECT_EQ(deg[g.bottom()], 1);
  EXPECT_EQ(deg[g.top()], 1);
  for (std::size_t v = 2; v < g.vertex_count(); ++v) EXPECT_GE(deg[v], 2);
  auto d = bfs_distances(g, g.bottom());
  for (auto x : d) EXPECT_LT(x, 1000u);
}

TEST(Laakso, BfsMatchesFloydWarshall) {
  for (int n = 1; n <= 2; ++n) {
    auto g = build_laakso(n);
    auto ref = oracle::hop_distances(g);
    for (std::uint32_t s = 0; s < g.vertex_count(); ++s) {
      auto d = bfs_distances(g, s);
      for (std::size_t t = 0; t < g.vertex_count(); ++t) ASSERT_EQ(static_cast<int>(d[t]), ref[s][t]);
    }
  }
  EXPECT_EQ(bfs_distances(build_laakso(1), 0)[1], 4u);
}

TEST(Graphs, ShortestPathMetricIsValid) {
  auto m = shortest_path_metric(build_laakso(1));
  EXPECT_TRUE(m.is_valid()) << m.validation_error();
  EXPECT_EQ(m(0, 1), 4);
  auto d = shortest_path_metric(build_diamond(2, 2));
  EXPECT_TRUE(d.is_valid());
  EXPECT_EQ(d(0, 1), 4);
}

TEST(Graphs, SubCopies) {
  EXPECT_EQ(sub_copies(build_laakso(2), 1).size(), 6u);
  auto g3 = build_laakso(3);
  auto c = sub_copies(g3, 1);
  EXPECT_EQ(c.size(), 36u);
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(c[i].first_edge(), 6 * i);
    EXPECT_EQ(c[i].edge_count(), 6u);
    EXPECT_EQ(c[i].level(), 1);
  }
  EXPECT_EQ(sub_copies(g3, 3).size(), 1u);
  EXPECT_THROW(sub_copies(g3, 4), DomainError);
}

TEST(Graphs, AddressesAreBase6) {
  auto g = build_laakso(3);
  for (std::size_t e = 0; e < g.edge_count(); e += 7) {
    auto a = g.edge_address(e);
    std::size_t idx = 0;
    for (auto d : a.digits()) idx = idx * 6 + d;
    EXPECT_EQ(idx, e);
    for (int j = 0; j <= 3; ++j) {
      auto s = g.copy_containing(e, j);
      EXPECT_TRUE(s.contains_edge(e));
      EXPECT_EQ(s.level(), j);
    }
  }
  EXPECT_EQ(g.edge_address(1 * 36 + 2 * 6 + 0).to_string(), "BCA");
}

TEST(Graphs, SubCopyIsIsomorphicToLowerLevel) {
  // edge adjacency inside any sub-L_1 of L_3 matches L_1
  auto g = build_laakso(3);
  auto l1 = build_laakso(1);
  for (const auto& s : sub_copies(g, 1)) {
    auto f = s.first_edge();
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) {
        bool same_ref = l1.edge(a).head == l1.edge(b).tail;
        bool same = g.edge(f + a).head == g.edge(f + b).tail;
        EXPECT_EQ(same, same_ref);
      }
  }
}

TEST(Graphs, CapacityCap) {
  EXPECT_THROW(build_laakso(7), CapacityError);
  EXPECT_THROW(build_laakso(3, 100), CapacityError);
  EXPECT_NO_THROW(build_laakso(3, 216));
  EXPECT_THROW(build_diamond(1, 1), DomainError);
  EXPECT_THROW(build_laakso(-1), DomainError);
}

TEST(Graphs, DiamondQuadrilateral) {
  auto g = build_diamond(1, 2);
  // both paths bottom -> top
  EXPECT_EQ(g.edge(0).tail, g.bottom());
  EXPECT_EQ(g.edge(2).tail, g.bottom());
  EXPECT_EQ(g.edge(1).head, g.top());
  EXPECT_EQ(g.edge(3).head, g.top());
  auto cyc = fundamental_cycles(g);
  ASSERT_EQ(cyc.size(), 1u);
  EXPECT_EQ(cyc[0].l1(), 4);
  EXPECT_EQ(cyc[0].linf(), 1);
}

TEST(Graphs, MetricValidation) {
  FiniteMetricSpace bad({"a", "b", "c"}, {0, 1, 5, 1, 0, 1, 5, 1, 0});
  EXPECT_FALSE(bad.is_valid());
  FiniteMetricSpace ok({"a", "b"}, {0, 2, 2, 0});
  EXPECT_TRUE(ok.is_valid());
  EXPECT_EQ(ok.scaled(Rational(1, 2))(0, 1), 1);
  EXPECT_EQ(ok.index_of("b").value(), 1u);
  EXPECT_FALSE(ok.index_of("z").has_value());
}
