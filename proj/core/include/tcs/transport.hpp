#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/edgespace.hpp"
#include "tcs/graphs.hpp"
#include "tcs/linalg.hpp"
#include "tcs/rational.hpp"

namespace tcs {

/// Zero-sum function on the points of a space; positive values are supplies.
struct TransportProblem {
  std::vector<Rational> values;

  std::size_t size() const { return values.size(); }
  Rational total() const;
  bool is_zero_sum() const { return total() == 0; }
  bool is_zero() const;
  /// Points with nonzero value, increasing.
  std::vector<std::uint32_t> support() const;

  TransportProblem& operator+=(const TransportProblem& other);
  TransportProblem& operator*=(const Rational& c);
  friend bool operator==(const TransportProblem&, const TransportProblem&) = default;
};

/// 1_u - 1_v on a space of `size` points.
TransportProblem dipole(std::size_t size, std::uint32_t u, std::uint32_t v, const Rational& amount = 1);

template <class T>
struct PlanStep {
  std::uint32_t source;
  std::uint32_t sink;
  T amount;
};

template <class T>
struct BasicPlan {
  std::vector<PlanStep<T>> steps;  // sorted by (source, sink), amounts > 0
  T cost{};
};

using TransportPlan = BasicPlan<Rational>;

/// Optimal value, plan and dual potentials of a balanced transportation
/// instance. potential[p] is defined on the support; for every source s and
/// sink t, potential[s] - potential[t] <= d(s,t), with equality on the plan.
template <class T>
struct TransportSolution {
  T norm{};
  BasicPlan<T> plan;
  std::vector<std::pair<std::uint32_t, T>> potential;
  std::size_t pivots = 0;
};

/// Transportation simplex: northwest-corner start, potentials on the basis
/// tree, Bland's rule for entering and leaving cells.
template <class T>
TransportSolution<T> solve_transport(const std::vector<T>& supply, const std::vector<T>& demand,
                                     const Matrix<T>& cost);

/// Exact TC norm. Throws DomainError for a nonzero-sum problem.
TransportSolution<Rational> tc_norm(const FiniteMetricSpace& space, const TransportProblem& p);
/// Same with hop distances of a graph, computed by BFS from the supplies only.
TransportSolution<Rational> tc_norm(const RecursiveGraph& g, const TransportProblem& p);
/// Floating backend.
TransportSolution<double> tc_norm_double(const FiniteMetricSpace& space, const TransportProblem& p);
TransportSolution<double> tc_norm_double(const RecursiveGraph& g, const TransportProblem& p);

/// Independent oracle: minimum over all spanning-tree bases of the
/// transportation polytope. Support size at most `max_support`.
Rational tc_norm_bruteforce(const FiniteMetricSpace& space, const TransportProblem& p, std::size_t max_support = 4);

/// sum_i a_i (1_{x_i} - 1_{y_i})
TransportProblem plan_problem(const TransportPlan& plan, std::size_t size);
/// Recomputed cost of a plan under the space's metric.
Rational plan_cost(const FiniteMetricSpace& space, const TransportPlan& plan);

/// sum_e x(e) (1_tail - 1_head) on the vertices.
TransportProblem boundary(const RecursiveGraph& g, const EdgeVector& x);

/// Signed indicators of the fundamental cycles of the BFS tree from the bottom
/// vertex, one per non-tree edge, in edge order.
std::vector<EdgeVector> fundamental_cycles(const RecursiveGraph& g);

struct QuotientResult {
  Rational norm;
  /// z in Z(G) attaining |x - z|_1 = norm, as coefficients on the fundamental cycles.
  std::vector<Rational> coefficients;
  EdgeVector nearest;
  std::size_t pivots = 0;
};

/// min over z in Z(G) of |x - z|_1, exact. Solved through the dual program
/// max <x,y> over |y|_inf <= 1, y orthogonal to the cycles; the primal minimizer
/// is recovered from the simplex multipliers and checked.
QuotientResult quotient_norm(const RecursiveGraph& g, const EdgeVector& x);
double quotient_norm_double(const RecursiveGraph& g, const EdgeVector& x);

/// Routes every plan step along the shortest path found by walking from the
/// source through the lowest-index neighbour one hop closer to the sink.
EdgeVector expand_plan(const RecursiveGraph& g, const TransportPlan& plan);

/// Pairs u < v with d(u,v) < d(u,w) + d(w,v) for every other point w.
std::vector<std::pair<std::uint32_t, std::uint32_t>> essential_edges(const FiniteMetricSpace& space);
std::size_t extreme_pair_count(const FiniteMetricSpace& space);

struct TreeCheck {
  bool is_tree = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // the essential edges
  std::optional<std::pair<std::uint32_t, std::uint32_t>> violation;
  std::string reason;
};

/// True iff the essential edges form a spanning tree whose weighted path
/// distances reproduce the metric.
TreeCheck is_weighted_tree_metric(const FiniteMetricSpace& space);

/// Flow of a problem through each tree edge (subtree sums below the edge,
/// rooted at point 0), in the order of `edges`.
std::vector<Rational> tree_edge_flows(const FiniteMetricSpace& space,
                                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                      const TransportProblem& p);

struct BadEquivReport {
  int n = 0;
  Rational lhs;  // TC norm of the combination
  Rational rhs;  // (3/4)^(n-1) |g_n|_1
  Rational l1;   // l1 norm of the combination
  std::vector<Rational> l1_steps;  // |.|_1 after each level, starting with g_n
  bool steps_exact = false;        // every step multiplies |.|_1 by exactly 3/4
  EdgeVector combination;
  bool ok() const { return lhs <= rhs && steps_exact; }
};

/// g_n - (1/2) sum_j (3/2)^(n-1-j) sum_i eps_j^i g_j^i with the signs picked
/// level by level from the residual on each sub-copy.
BadEquivReport badequiv_check(int n, std::size_t max_edges = kDefaultMaxEdges);

}  // namespace tcs
