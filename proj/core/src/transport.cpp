#include "tcs/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "tcs/errors.hpp"
#include "tcs/spaces.hpp"

namespace tcs {

Rational TransportProblem::total() const {
  Rational s = 0;
  for (const auto& v : values) s += v;
  return s;
}

bool TransportProblem::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](const Rational& v) { return v == 0; });
}

std::vector<std::uint32_t> TransportProblem::support() const {
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0) out.push_back(static_cast<std::uint32_t>(i));
  return out;
}

TransportProblem& TransportProblem::operator+=(const TransportProblem& other) {
  if (other.size() != size()) throw DomainError("problems live on different spaces");
  for (std::size_t i = 0; i < size(); ++i) values[i] += other.values[i];
  return *this;
}

TransportProblem& TransportProblem::operator*=(const Rational& c) {
  for (auto& v : values) v *= c;
  return *this;
}

TransportProblem dipole(std::size_t size, std::uint32_t u, std::uint32_t v, const Rational& amount) {
  if (u >= size || v >= size) throw DomainError("point out of range");
  TransportProblem p{std::vector<Rational>(size)};
  p.values[u] += amount;
  p.values[v] -= amount;
  return p;
}

namespace {

template <class T>
struct Tol;
template <>
struct Tol<Rational> {
  static bool zero(const Rational& x) { return x == 0; }
  static bool neg(const Rational& x) { return x < 0; }
  static bool pos(const Rational& x) { return x > 0; }
};
template <>
struct Tol<double> {
  static constexpr double eps = 1e-12;
  static bool zero(double x) { return std::fabs(x) <= eps; }
  static bool neg(double x) { return x < -eps; }
  static bool pos(double x) { return x > eps; }
};

}  // namespace

template <class T>
TransportSolution<T> solve_transport(const std::vector<T>& supply, const std::vector<T>& demand,
                                     const Matrix<T>& cost) {
  const std::size_t S = supply.size(), D = demand.size();
  if (cost.rows() != S || cost.cols() != D) throw DomainError("cost matrix has wrong shape");
  TransportSolution<T> sol;
  if (S == 0 || D == 0) return sol;

  Matrix<T> x(S, D);
  std::vector<char> basic(S * D, 0);
  {
    std::vector<T> s = supply, d = demand;
    std::size_t i = 0, j = 0;
    for (;;) {
      T q = s[i] < d[j] ? s[i] : d[j];
      x(i, j) = q;
      basic[i * D + j] = 1;
      s[i] -= q;
      d[j] -= q;
      if (i == S - 1 && j == D - 1) break;
      if ((Tol<T>::zero(s[i]) && i < S - 1) || j == D - 1) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  const std::size_t nodes = S + D;
  std::vector<T> pot(nodes);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nodes);  // (node, cell)
  std::vector<std::size_t> parent(nodes), parent_cell(nodes);
  std::vector<char> seen(nodes);
  const std::size_t cap = 1000000;

  auto build_tree = [&]() {
    for (auto& a : adj) a.clear();
    for (std::size_t c = 0; c < S * D; ++c)
      if (basic[c]) {
        adj[c / D].push_back({S + c % D, c});
        adj[S + c % D].push_back({c / D, c});
      }
  };
  // BFS from `root`; fills parent pointers and, from root 0, the potentials
  auto bfs = [&](std::size_t root, bool potentials) {
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<std::size_t> q{root};
    seen[root] = 1;
    if (potentials) pot[root] = 0;
    while (!q.empty()) {
      auto u = q.front();
      q.pop_front();
      for (auto [v, c] : adj[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        parent[v] = u;
        parent_cell[v] = c;
        // c_ij = u_i + v_j
        if (potentials) pot[v] = cost(c / D, c % D) - pot[u];
        q.push_back(v);
      }
    }
    for (std::size_t v = 0; v < nodes; ++v)
      if (!seen[v]) throw VerificationError("transport basis is not a spanning tree");
  };

  for (;;) {
    if (sol.pivots > cap) throw VerificationError("transportation simplex did not terminate");
    build_tree();
    bfs(0, true);
    std::size_t enter = S * D;
    for (std::size_t c = 0; c < S * D && enter == S * D; ++c) {
      if (basic[c]) continue;
      const std::size_t i = c / D, j = c % D;
      if (Tol<T>::neg(cost(i, j) - pot[i] - pot[S + j])) enter = c;
    }
    if (enter == S * D) break;
    const std::size_t ei = enter / D, ej = enter % D;
    // tree path from column node back to the row node
    bfs(ei, false);
    std::vector<std::size_t> path;  // cells, first one adjacent to the column node
    for (std::size_t v = S + ej; v != ei; v = parent[v]) path.push_back(parent_cell[v]);
    bool have = false;
    T theta{};
    std::size_t leave = S * D;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const std::size_t c = path[k];
      const T& val = x(c / D, c % D);
      if (!have || Tol<T>::neg(val - theta) || (!Tol<T>::pos(val - theta) && c < leave)) {
        theta = val;
        leave = c;
        have = true;
      }
    }
    x(ei, ej) += theta;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const std::size_t c = path[k];
      if (k % 2 == 0) {
        x(c / D, c % D) -= theta;
      } else {
        x(c / D, c % D) += theta;
      }
    }
    x(leave / D, leave % D) = 0;
    basic[leave] = 0;
    basic[enter] = 1;
    ++sol.pivots;
  }

  sol.norm = 0;
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < D; ++j)
      if (Tol<T>::pos(x(i, j))) {
        sol.plan.steps.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), x(i, j)});
        sol.norm += x(i, j) * cost(i, j);
      }
  sol.plan.cost = sol.norm;
  for (std::size_t i = 0; i < S; ++i) sol.potential.push_back({static_cast<std::uint32_t>(i), pot[i]});
  for (std::size_t j = 0; j < D; ++j) sol.potential.push_back({static_cast<std::uint32_t>(S + j), T(-pot[S + j])});
  return sol;
}

template TransportSolution<Rational> solve_transport(const std::vector<Rational>&, const std::vector<Rational>&,
                                                     const Matrix<Rational>&);
template TransportSolution<double> solve_transport(const std::vector<double>&, const std::vector<double>&,
                                                   const Matrix<double>&);

namespace {

template <class T, class Convert, class Dist>
TransportSolution<T> solve_problem(const TransportProblem& p, Convert conv, Dist dist) {
  if (!p.is_zero_sum()) throw DomainError("transportation problem must have zero sum, got " + to_string(p.total()));
  std::vector<std::uint32_t> src, snk;
  std::vector<T> supply, demand;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.values[i] > 0) {
      src.push_back(static_cast<std::uint32_t>(i));
      supply.push_back(conv(p.values[i]));
    } else if (p.values[i] < 0) {
      snk.push_back(static_cast<std::uint32_t>(i));
      demand.push_back(conv(Rational(-p.values[i])));
    }
  }
  Matrix<T> cost(src.size(), snk.size());
  dist(src, snk, cost);
  auto sol = solve_transport(supply, demand, cost);
  for (auto& s : sol.plan.steps) {
    s.source = src[s.source];
    s.sink = snk[s.sink];
  }
  for (auto& [pt, v] : sol.potential) pt = pt < src.size() ? src[pt] : snk[pt - src.size()];
  std::sort(sol.potential.begin(), sol.potential.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return sol;
}

template <class T, class Convert>
auto metric_costs(const FiniteMetricSpace& space, Convert conv) {
  return [&space, conv](const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& snk, Matrix<T>& c) {
    for (std::size_t i = 0; i < src.size(); ++i)
      for (std::size_t j = 0; j < snk.size(); ++j) c(i, j) = conv(space(src[i], snk[j]));
  };
}

template <class T>
auto graph_costs(const RecursiveGraph& g) {
  return [&g](const std::vector<std::uint32_t>& src, const std::vector<std::uint32_t>& snk, Matrix<T>& c) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto d = bfs_distances(g, src[i]);
      for (std::size_t j = 0; j < snk.size(); ++j) c(i, j) = T(d[snk[j]]);
    }
  };
}

void check_size(std::size_t points, const TransportProblem& p) {
  if (p.size() != points)
    throw DomainError("problem has " + std::to_string(p.size()) + " values for " + std::to_string(points) + " points");
}

const auto kExact = [](const Rational& v) { return v; };
const auto kFloat = [](const Rational& v) { return to_double(v); };

}  // namespace

TransportSolution<Rational> tc_norm(const FiniteMetricSpace& space, const TransportProblem& p) {
  check_size(space.size(), p);
  return solve_problem<Rational>(p, kExact, metric_costs<Rational>(space, kExact));
}

TransportSolution<Rational> tc_norm(const RecursiveGraph& g, const TransportProblem& p) {
  check_size(g.vertex_count(), p);
  return solve_problem<Rational>(p, kExact, graph_costs<Rational>(g));
}

TransportSolution<double> tc_norm_double(const FiniteMetricSpace& space, const TransportProblem& p) {
  check_size(space.size(), p);
  return solve_problem<double>(p, kFloat, metric_costs<double>(space, kFloat));
}

TransportSolution<double> tc_norm_double(const RecursiveGraph& g, const TransportProblem& p) {
  check_size(g.vertex_count(), p);
  return solve_problem<double>(p, kFloat, graph_costs<double>(g));
}

Rational tc_norm_bruteforce(const FiniteMetricSpace& space, const TransportProblem& p, std::size_t max_support) {
  check_size(space.size(), p);
  if (!p.is_zero_sum()) throw DomainError("transportation problem must have zero sum");
  std::vector<std::uint32_t> src, snk;
  for (std::uint32_t i = 0; i < p.size(); ++i) {
    if (p.values[i] > 0) src.push_back(i);
    if (p.values[i] < 0) snk.push_back(i);
  }
  const std::size_t S = src.size(), D = snk.size();
  if (S + D > max_support) throw DomainError("support too large for enumeration");
  if (S == 0) return 0;
  const std::size_t cells = S * D, want = S + D - 1;
  std::optional<Rational> best;
  for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != want) continue;
    // leaf peeling on the chosen cells
    std::vector<Rational> residual(S + D);
    for (std::size_t i = 0; i < S; ++i) residual[i] = p.values[src[i]];
    for (std::size_t j = 0; j < D; ++j) residual[S + j] = -p.values[snk[j]];
    std::vector<char> used(cells, 0), done(S + D, 0);
    for (std::size_t c = 0; c < cells; ++c) used[c] = (mask >> c) & 1;
    Rational cost = 0;
    bool ok = true;
    for (std::size_t step = 0; step < want && ok; ++step) {
      bool found = false;
      for (std::size_t v = 0; v < S + D && !found; ++v) {
        if (done[v]) continue;
        std::size_t deg = 0, cell = 0;
        for (std::size_t c = 0; c < cells; ++c)
          if (used[c] && (c / D == v || S + c % D == v)) {
            ++deg;
            cell = c;
          }
        if (deg != 1) continue;
        found = true;
        const Rational flow = residual[v];
        if (flow < 0) ok = false;
        const std::size_t other = v < S ? S + cell % D : cell / D;
        residual[other] -= flow;
        residual[v] = 0;
        used[cell] = 0;
        done[v] = 1;
        cost += flow * space(src[cell / D], snk[cell % D]);
      }
      if (!found) ok = false;  // chosen cells contain a cycle
    }
    if (!ok) continue;
    for (std::size_t v = 0; v < S + D; ++v)
      if (!done[v] && residual[v] != 0) ok = false;
    if (ok && (!best || cost < *best)) best = cost;
  }
  if (!best) throw VerificationError("no feasible basis found");
  return *best;
}

TransportProblem plan_problem(const TransportPlan& plan, std::size_t size) {
  TransportProblem p{std::vector<Rational>(size)};
  for (const auto& s : plan.steps) {
    if (s.source >= size || s.sink >= size) throw DomainError("plan point out of range");
    p.values[s.source] += s.amount;
    p.values[s.sink] -= s.amount;
  }
  return p;
}

Rational plan_cost(const FiniteMetricSpace& space, const TransportPlan& plan) {
  Rational c = 0;
  for (const auto& s : plan.steps) c += s.amount * space(s.source, s.sink);
  return c;
}

TransportProblem boundary(const RecursiveGraph& g, const EdgeVector& x) {
  if (x.dim() != g.edge_count()) throw DomainError("edge vector does not match the graph");
  TransportProblem p{std::vector<Rational>(g.vertex_count())};
  for (const auto& [e, v] : x.entries()) {
    p.values[g.edge(e).tail] += v;
    p.values[g.edge(e).head] -= v;
  }
  return p;
}

std::vector<EdgeVector> fundamental_cycles(const RecursiveGraph& g) {
  const std::size_t V = g.vertex_count();
  std::vector<std::uint32_t> parent(V), parent_edge(V), depth(V);
  std::vector<char> seen(V, 0), tree_edge(g.edge_count(), 0);
  std::deque<std::uint32_t> q{g.bottom()};
  seen[g.bottom()] = 1;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    for (auto [v, e] : g.neighbours(u)) {
      if (seen[v]) continue;
      seen[v] = 1;
      parent[v] = u;
      parent_edge[v] = e;
      depth[v] = depth[u] + 1;
      tree_edge[e] = 1;
      q.push_back(v);
    }
  }
  std::vector<EdgeVector> out;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    if (tree_edge[e]) continue;
    // e forward, then from head back to tail through the tree
    std::vector<EdgeVector::Entry> entries{{e, Rational(1)}};
    std::uint32_t a = g.edge(e).head, b = g.edge(e).tail;
    std::vector<EdgeVector::Entry> down;
    while (a != b) {
      if (depth[a] >= depth[b]) {
        // climb from a: traversing child -> parent
        const auto pe = parent_edge[a];
        entries.emplace_back(pe, Rational(g.edge(pe).tail == a ? 1 : -1));
        a = parent[a];
      } else {
        // b side is traversed parent -> child
        const auto pe = parent_edge[b];
        down.emplace_back(pe, Rational(g.edge(pe).tail == parent[b] ? 1 : -1));
        b = parent[b];
      }
    }
    entries.insert(entries.end(), down.begin(), down.end());
    out.emplace_back(g.edge_count(), std::move(entries));
  }
  return out;
}

namespace {

template <class T, class Convert>
LPResult<T> quotient_lp(const RecursiveGraph& g, const std::vector<EdgeVector>& cycles, const EdgeVector& x,
                        Convert conv) {
  const std::size_t E = g.edge_count();
  Matrix<T> a(cycles.size(), E);
  for (std::size_t i = 0; i < cycles.size(); ++i)
    for (const auto& [e, v] : cycles[i].entries()) a(i, e) = conv(v);
  std::vector<T> c(E, T(0));
  for (const auto& [e, v] : x.entries()) c[e] = conv(v);
  auto lp = BoundedLP<T>::boxed(std::move(a), std::vector<T>(cycles.size(), T(0)), std::move(c), T(-1), T(1));
  return maximize(lp);
}

}  // namespace

QuotientResult quotient_norm(const RecursiveGraph& g, const EdgeVector& x) {
  if (x.dim() != g.edge_count()) throw DomainError("edge vector does not match the graph");
  QuotientResult res;
  if (x.is_zero()) {
    res.norm = 0;
    res.nearest = EdgeVector(x.dim());
    return res;
  }
  auto cycles = fundamental_cycles(g);
  auto lp = quotient_lp<Rational>(g, cycles, x, kExact);
  res.norm = lp.objective;
  res.coefficients = lp.duals;
  res.pivots = lp.pivots;
  EdgeAccumulator acc(x.dim());
  for (std::size_t i = 0; i < cycles.size(); ++i)
    if (lp.duals[i] != 0) acc.axpy(lp.duals[i], cycles[i]);
  res.nearest = acc.take();
  if ((x - res.nearest).l1() != res.norm)
    throw VerificationError("quotient LP: primal and dual values differ (" + to_string((x - res.nearest).l1()) +
                            " vs " + to_string(res.norm) + ")");
  return res;
}

double quotient_norm_double(const RecursiveGraph& g, const EdgeVector& x) {
  if (x.dim() != g.edge_count()) throw DomainError("edge vector does not match the graph");
  if (x.is_zero()) return 0;
  return quotient_lp<double>(g, fundamental_cycles(g), x, kFloat).objective;
}

EdgeVector expand_plan(const RecursiveGraph& g, const TransportPlan& plan) {
  EdgeAccumulator acc(g.edge_count());
  for (const auto& s : plan.steps) {
    if (s.source >= g.vertex_count() || s.sink >= g.vertex_count()) throw DomainError("plan point out of range");
    auto dist = bfs_distances(g, s.sink);
    std::uint32_t cur = s.source;
    while (cur != s.sink) {
      bool moved = false;
      for (auto [v, e] : g.neighbours(cur)) {
        if (dist[v] + 1 != dist[cur]) continue;
        acc.add(e, g.edge(e).tail == cur ? s.amount : Rational(-s.amount));
        cur = v;
        moved = true;
        break;
      }
      if (!moved) throw DomainError("plan endpoints are not connected");
    }
  }
  return acc.take();
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> essential_edges(const FiniteMetricSpace& space) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  const std::uint32_t m = static_cast<std::uint32_t>(space.size());
  for (std::uint32_t u = 0; u < m; ++u)
    for (std::uint32_t v = u + 1; v < m; ++v) {
      bool ess = space(u, v) > 0;
      for (std::uint32_t w = 0; w < m && ess; ++w)
        if (w != u && w != v && !(space(u, v) < space(u, w) + space(w, v))) ess = false;
      if (ess) out.emplace_back(u, v);
    }
  return out;
}

std::size_t extreme_pair_count(const FiniteMetricSpace& space) { return essential_edges(space).size(); }

namespace {

struct TreeWalk {
  std::vector<std::uint32_t> parent;
  std::vector<std::size_t> parent_edge;
  std::vector<std::uint32_t> order;  // BFS order from point 0
};

TreeWalk walk_tree(std::size_t m, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj(m);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back({edges[i].second, i});
    adj[edges[i].second].push_back({edges[i].first, i});
  }
  TreeWalk w{std::vector<std::uint32_t>(m), std::vector<std::size_t>(m, edges.size()), {}};
  std::vector<char> seen(m, 0);
  if (m == 0) return w;
  std::deque<std::uint32_t> q{0};
  seen[0] = 1;
  while (!q.empty()) {
    auto u = q.front();
    q.pop_front();
    w.order.push_back(u);
    for (auto [v, e] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      w.parent[v] = u;
      w.parent_edge[v] = e;
      q.push_back(v);
    }
  }
  return w;
}

}  // namespace

TreeCheck is_weighted_tree_metric(const FiniteMetricSpace& space) {
  TreeCheck out;
  out.edges = essential_edges(space);
  const std::size_t m = space.size();
  if (m <= 1) {
    out.is_tree = true;
    return out;
  }
  if (out.edges.size() != m - 1) {
    out.reason = std::to_string(out.edges.size()) + " essential edges on " + std::to_string(m) + " points";
    return out;
  }
  auto w = walk_tree(m, out.edges);
  if (w.order.size() != m) {
    out.reason = "essential edges are not connected";
    return out;
  }
  for (std::uint32_t s = 0; s < m; ++s) {
    // path distances from s
    std::vector<Rational> d(m);
    std::vector<char> seen(m, 0);
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& [a, b] : out.edges) {
        std::uint32_t v;
        if (a == u) {
          v = b;
        } else if (b == u) {
          v = a;
        } else {
          continue;
        }
        if (seen[v]) continue;
        seen[v] = 1;
        d[v] = d[u] + space(a, b);
        stack.push_back(v);
      }
    }
    for (std::uint32_t t = 0; t < m; ++t)
      if (d[t] != space(s, t)) {
        out.violation = std::make_pair(std::min(s, t), std::max(s, t));
        out.reason = "tree path length differs from the metric";
        return out;
      }
  }
  out.is_tree = true;
  return out;
}

std::vector<Rational> tree_edge_flows(const FiniteMetricSpace& space,
                                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
                                      const TransportProblem& p) {
  check_size(space.size(), p);
  auto w = walk_tree(space.size(), edges);
  if (w.order.size() != space.size()) throw DomainError("edges do not span the points");
  std::vector<Rational> below = p.values, flows(edges.size());
  for (auto it = w.order.rbegin(); it != w.order.rend(); ++it) {
    const auto v = *it;
    if (v == 0) continue;
    flows[w.parent_edge[v]] = below[v];
    below[w.parent[v]] += below[v];
  }
  return flows;
}

BadEquivReport badequiv_check(int n, std::size_t max_edges) {
  if (n < 1) throw DomainError("n must be at least 1");
  auto g = build_laakso(n, max_edges);
  OrthogonalBasis basis(n, max_edges);
  BadEquivReport rep;
  rep.n = n;
  EdgeVector z = named_vector(NamedRole::g, n, max_edges).vector;
  const Rational g_l1 = z.l1();
  rep.l1_steps.push_back(g_l1);
  rep.steps_exact = true;
  for (int j = n - 1; j >= 1; --j) {
    const EdgeVector fj = named_vector(NamedRole::f, j, max_edges).vector;
    const Rational mag = ipow(Rational(3, 2), n - 1 - j);
    EdgeVector next = z;
    for (const auto& copy : sub_copies(g, j)) {
      const std::size_t first = copy.first_edge();
      const Rational c = z[first] / fj[0];
      auto [lo, hi] = z.range(first, copy.end_edge());
      std::size_t count = 0;
      for (auto it = lo; it != hi; ++it, ++count)
        if (it->second != c * fj[it->first - first])
          throw VerificationError("residual on copy '" + copy.to_string() + "' is not a multiple of f_j");
      if (c != 0 && count != fj.nnz()) throw VerificationError("residual support mismatch on '" + copy.to_string() + "'");
      if (c != 0 && abs(c) != mag)
        throw VerificationError("residual on copy '" + copy.to_string() + "' has magnitude " + to_string(abs(c)));
      const int eps = sgn(c);
      if (eps != 0) next.axpy(Rational(-eps) * mag / 2, basis[basis.g_index(copy)].vector);
    }
    const Rational before = z.l1();
    z = std::move(next);
    rep.l1_steps.push_back(z.l1());
    if (z.l1() != Rational(3, 4) * before) rep.steps_exact = false;
  }
  rep.l1 = z.l1();
  rep.rhs = ipow(Rational(3, 4), n - 1) * g_l1;
  rep.lhs = tc_norm(g, boundary(g, z)).norm;
  rep.combination = std::move(z);
  return rep;
}

}  // namespace tcs
