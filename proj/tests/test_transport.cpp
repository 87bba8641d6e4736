#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tcs/errors.hpp"
#include "tcs/spaces.hpp"
#include "tcs/transport.hpp"

using namespace tcs;

namespace {

FiniteMetricSpace from_table(const std::vector<std::vector<Rational>>& d) {
  std::vector<std::string> names;
  std::vector<Rational> flat;
  for (std::size_t i = 0; i < d.size(); ++i) {
    names.push_back("p" + std::to_string(i));
    for (const auto& v : d[i]) flat.push_back(v);
  }
  return FiniteMetricSpace(names, flat);
}

FiniteMetricSpace cycle4() {
  std::vector<std::vector<Rational>> d(4, std::vector<Rational>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      int k = std::abs(i - j);
      d[i][j] = std::min(k, 4 - k);
    }
  return from_table(d);
}

TransportProblem random_integer_problem(std::mt19937_64& rng, std::size_t m, int mass) {
  TransportProblem p{std::vector<Rational>(m)};
  std::uniform_int_distribution<std::size_t> pt(0, m - 1);
  for (int i = 0; i < mass; ++i) {
    p.values[pt(rng)] += 1;
    p.values[pt(rng)] -= 1;
  }
  return p;
}

EdgeVector random_sparse(std::mt19937_64& rng, std::size_t dim, int terms) {
  std::uniform_int_distribution<std::size_t> edge(0, dim - 1);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  std::vector<EdgeVector::Entry> e;
  for (int i = 0; i < terms; ++i)
    e.emplace_back(static_cast<std::uint32_t>(edge(rng)), Rational(num(rng), den(rng)));
  return EdgeVector(dim, e);
}

// potentials are a feasible dual certificate with value equal to the primal cost
void expect_certified(const FiniteMetricSpace& s, const TransportProblem& p, const TransportSolution<Rational>& sol) {
  std::vector<std::optional<Rational>> u(s.size());
  for (const auto& [pt, v] : sol.potential) u[pt] = v;
  Rational dual = 0;
  for (auto i : p.support()) {
    ASSERT_TRUE(u[i].has_value());
    dual += p.values[i] * *u[i];
  }
  EXPECT_EQ(dual, sol.norm);
  for (auto a : p.support())
    for (auto b : p.support())
      if (p.values[a] > 0 && p.values[b] < 0) EXPECT_LE(*u[a] - *u[b], s(a, b));
  EXPECT_EQ(plan_cost(s, sol.plan), sol.norm);
  EXPECT_EQ(plan_problem(sol.plan, s.size()), p);
}

}  // namespace

TEST(Transport, Degenerate) {
  auto s = cycle4();
  TransportProblem zero{std::vector<Rational>(4)};
  auto sol = tc_norm(s, zero);
  EXPECT_EQ(sol.norm, 0);
  EXPECT_TRUE(sol.plan.steps.empty());
  TransportProblem bad{{1, 0, 0, 0}};
  EXPECT_THROW(tc_norm(s, bad), DomainError);
  EXPECT_EQ(tc_norm(s, dipole(4, 0, 2, 3)).norm, 6);
}

TEST(Transport, MatchesIntegerPlanSearch) {
  std::mt19937_64 rng(11);
  auto c4 = cycle4();
  auto l1 = shortest_path_metric(build_laakso(1));
  for (const auto* s : {&c4, &l1}) {
    for (int t = 0; t < 40; ++t) {
      auto p = random_integer_problem(rng, s->size(), 3);
      std::vector<int> sup(s->size()), dem(s->size());
      for (std::size_t i = 0; i < s->size(); ++i) {
        int v = static_cast<int>(p.values[i].convert_to<long>());
        (v > 0 ? sup[i] : dem[i]) = std::abs(v);
      }
      auto ref = oracle::integer_transport(sup, dem, [&](std::size_t a, std::size_t b) { return (*s)(a, b); });
      auto sol = tc_norm(*s, p);
      EXPECT_EQ(sol.norm, ref);
      expect_certified(*s, p, sol);
    }
  }
}

TEST(Transport, BruteForceOracleAgrees) {
  std::mt19937_64 rng(12);
  auto s = shortest_path_metric(build_laakso(1));
  std::uniform_int_distribution<int> num(1, 9);
  for (int t = 0; t < 60; ++t) {
    TransportProblem p{std::vector<Rational>(s.size())};
    std::uniform_int_distribution<std::uint32_t> pt(0, 5);
    auto a = pt(rng), b = pt(rng), c = pt(rng);
    Rational x(num(rng), 3), y(num(rng), 5);
    p.values[a] += x;
    p.values[b] += y;
    p.values[c] -= x + y;
    if (p.support().size() > 4) continue;
    EXPECT_EQ(tc_norm(s, p).norm, tc_norm_bruteforce(s, p));
  }
}

TEST(Transport, RationalTreesMatchClosedForm) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> num(-5, 5);
  for (int t = 0; t < 40; ++t) {
    auto tree = oracle::random_tree(rng, 3 + t % 6);
    auto s = from_table(tree.dist);
    TransportProblem p{std::vector<Rational>(tree.m)};
    Rational sum = 0;
    for (std::size_t i = 0; i + 1 < tree.m; ++i) sum += p.values[i] = Rational(num(rng), 1 + i % 3);
    p.values[tree.m - 1] = -sum;
    auto sol = tc_norm(s, p);
    EXPECT_EQ(sol.norm, oracle::tree_tc_norm(tree, p.values));
    expect_certified(s, p, sol);
    auto flows = tree_edge_flows(s, tree.edges, p);
    Rational cost = 0;
    for (std::size_t i = 0; i < flows.size(); ++i) cost += abs(flows[i]) * tree.weights[i];
    EXPECT_EQ(cost, sol.norm);
  }
}

TEST(Transport, NormAxioms) {
  std::mt19937_64 rng(14);
  auto s = shortest_path_metric(build_laakso(1));
  for (int t = 0; t < 30; ++t) {
    auto p = random_integer_problem(rng, 6, 3), q = random_integer_problem(rng, 6, 2);
    auto np = tc_norm(s, p).norm, nq = tc_norm(s, q).norm;
    auto sum = p;
    sum += q;
    EXPECT_LE(tc_norm(s, sum).norm, np + nq);
    auto scaled = p;
    scaled *= Rational(-5, 3);
    EXPECT_EQ(tc_norm(s, scaled).norm, Rational(5, 3) * np);
    EXPECT_EQ(tc_norm(s.scaled(Rational(7, 2)), p).norm, Rational(7, 2) * np);
    EXPECT_EQ(np.is_zero(), p.is_zero());
  }
}

TEST(Transport, DoubleBackend) {
  std::mt19937_64 rng(15);
  auto s = shortest_path_metric(build_laakso(2));
  for (int t = 0; t < 20; ++t) {
    auto p = random_integer_problem(rng, s.size(), 4);
    p *= Rational(1, 3);
    EXPECT_NEAR(tc_norm_double(s, p).norm, to_double(tc_norm(s, p).norm), 1e-9);
  }
}

TEST(Transport, GraphCostsMatchMetric) {
  std::mt19937_64 rng(16);
  auto g = build_laakso(2);
  auto s = shortest_path_metric(g);
  for (int t = 0; t < 20; ++t) {
    auto p = random_integer_problem(rng, g.vertex_count(), 3);
    EXPECT_EQ(tc_norm(g, p).norm, tc_norm(s, p).norm);
  }
}

TEST(Quotient, Boundary) {
  auto g = build_laakso(1);
  auto b = boundary(g, EdgeVector::unit(6, 0, 2));
  EXPECT_EQ(b.values[g.edge(0).tail], 2);
  EXPECT_EQ(b.values[g.edge(0).head], -2);
  for (const auto& z : fundamental_cycles(g)) EXPECT_TRUE(boundary(g, z).is_zero());
  EXPECT_EQ(fundamental_cycles(build_laakso(2)).size(), 7u);
}

TEST(Quotient, EqualsTransport) {
  std::mt19937_64 rng(17);
  std::vector<RecursiveGraph> gs{build_laakso(1), build_laakso(2), build_diamond(1, 2), build_diamond(2, 2),
                                 build_diamond(1, 3)};
  for (const auto& g : gs)
    for (int t = 0; t < 25; ++t) {
      auto x = random_sparse(rng, g.edge_count(), 5);
      auto q = quotient_norm(g, x);
      auto tc = tc_norm(g, boundary(g, x));
      EXPECT_EQ(q.norm, tc.norm);
      EXPECT_EQ((x - q.nearest).l1(), q.norm);
      EXPECT_TRUE(boundary(g, q.nearest).is_zero());
      EXPECT_NEAR(quotient_norm_double(g, x), to_double(q.norm), 1e-9);
      // quotient norm never exceeds l1
      EXPECT_LE(q.norm, x.l1());
    }
}

TEST(Quotient, PlanExpansion) {
  auto g = build_laakso(1);
  TransportPlan plan{{{g.bottom(), g.top(), 1}}, 4};
  auto f = expand_plan(g, plan);
  EXPECT_EQ(f.l1(), 4);
  EXPECT_EQ(boundary(g, f), plan_problem(plan, g.vertex_count()));
  std::mt19937_64 rng(18);
  auto g2 = build_laakso(2);
  for (int t = 0; t < 20; ++t) {
    auto p = random_integer_problem(rng, g2.vertex_count(), 3);
    auto sol = tc_norm(g2, p);
    auto y = expand_plan(g2, sol.plan);
    EXPECT_EQ(y.l1(), sol.norm);
    EXPECT_EQ(boundary(g2, y), p);
  }
}

TEST(Quotient, SpecialCutVectorsAreGeodesic) {
  for (int n = 1; n <= 3; ++n) {
    auto g = build_laakso(n);
    auto gn = named_vector(NamedRole::g, n).vector;
    EXPECT_EQ(tc_norm(g, boundary(g, gn)).norm, gn.l1());
    EXPECT_EQ(gn.l1(), Rational(3, 2) * ipow(Rational(4), n));
  }
  // every special g^i_j on L_2
  OrthogonalBasis b(2);
  auto g = build_laakso(2);
  for (std::size_t i = b.cycle_count(); i < b.size(); ++i)
    if (b[i].is_special()) EXPECT_EQ(tc_norm(g, boundary(g, b[i].vector)).norm, b[i].vector.l1());
}

TEST(BadEquiv, Inequality) {
  for (int n = 1; n <= 3; ++n) {
    auto r = badequiv_check(n);
    EXPECT_TRUE(r.ok());
    EXPECT_EQ(r.rhs, ipow(Rational(3, 4), n - 1) * Rational(3, 2) * ipow(Rational(4), n));
    EXPECT_LE(r.lhs, r.rhs);
    EXPECT_TRUE(r.steps_exact);
    for (std::size_t s = 1; s < r.l1_steps.size(); ++s) EXPECT_EQ(r.l1_steps[s], Rational(3, 4) * r.l1_steps[s - 1]);
    auto g = build_laakso(n);
    EXPECT_EQ(tc_norm(g, boundary(g, r.combination)).norm, r.lhs);
  }
  EXPECT_LE(badequiv_check(2).lhs, 18);
}

TEST(Trees, EssentialEdgesOfRandomTrees) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 50; ++t) {
    auto tree = oracle::random_tree(rng, 2 + t % 7);
    auto s = from_table(tree.dist);
    auto r = is_weighted_tree_metric(s);
    EXPECT_TRUE(r.is_tree) << r.reason;
    EXPECT_EQ(r.edges.size(), tree.m - 1);
    std::set<std::pair<std::uint32_t, std::uint32_t>> want(tree.edges.begin(), tree.edges.end());
    std::set<std::pair<std::uint32_t, std::uint32_t>> got(r.edges.begin(), r.edges.end());
    EXPECT_EQ(got, want);
    EXPECT_EQ(extreme_pair_count(s), tree.m - 1);
  }
}

TEST(Trees, NonTrees) {
  auto c4 = cycle4();
  EXPECT_EQ(essential_edges(c4).size(), 4u);
  EXPECT_FALSE(is_weighted_tree_metric(c4).is_tree);
  EXPECT_FALSE(is_weighted_tree_metric(shortest_path_metric(build_laakso(1))).is_tree);
  for (std::size_t m = 2; m <= 6; ++m) {
    std::vector<std::vector<Rational>> d(m, std::vector<Rational>(m, 1));
    for (std::size_t i = 0; i < m; ++i) d[i][i] = 0;
    EXPECT_EQ(extreme_pair_count(from_table(d)), m * (m - 1) / 2);
  }
}
