#pragma once

// Test-side reference computations. Deliberately naive: dense matrices,
// plain Gaussian elimination, exhaustive search. Only the Rational type and
// the graph's edge list are taken from the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "tcs/graphs.hpp"
#include "tcs/rational.hpp"

namespace oracle {

using tcs::Rational;
using Mat = std::vector<std::vector<Rational>>;
using Vec = std::vector<Rational>;

// ---- counting

struct Counts {
  std::uint64_t vertices;
  std::uint64_t edges;
};

// every edge of level m-1 becomes a gadget with `fresh` new vertices and `arity` edges
inline Counts recursive_counts(int n, std::uint64_t arity, std::uint64_t fresh) {
  Counts c{2, 1};
  for (int i = 0; i < n; ++i) c = {c.vertices + fresh * c.edges, c.edges * arity};
  return c;
}
inline Counts laakso_counts(int n) { return recursive_counts(n, 6, 4); }
inline Counts diamond_counts(int n, int k) {
  return recursive_counts(n, 2 * static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(k));
}

// ---- dense linear algebra

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

inline Rational l1(const Vec& a) {
  Rational s = 0;
  for (const auto& v : a) s += abs(v);
  return s;
}

// reduced row echelon form, returns pivot columns
inline std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> piv;
  if (m.empty()) return piv;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!m[r][j].is_zero()) m[i][j] -= f * m[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  m.resize(r);
  return piv;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

inline Mat nullspace(Mat m, std::size_t cols) {
  auto piv = rref(m);
  std::vector<bool> is_piv(cols, false);
  for (auto p : piv) is_piv[p] = true;
  Mat out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    Vec v(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    out.push_back(std::move(v));
  }
  return out;
}

// x with a x = b, or nullopt
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  Mat aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  auto piv = rref(aug);
  if (!piv.empty() && piv.back() == cols) return std::nullopt;
  Vec x(cols);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  return x;
}

inline Mat transpose(const Mat& m) {
  if (m.empty()) return {};
  Mat t(m[0].size(), Vec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Mat c(n, Vec(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[t][j].is_zero()) c[i][j] += a[i][t] * b[t][j];
    }
  return c;
}

// orthogonal projection (columns) onto span of `rows`, via Gram system
inline Mat projection_onto_span(const Mat& rows, std::size_t dim) {
  Mat basis = rows;
  rref(basis);
  const std::size_t r = basis.size();
  Mat gram(r, Vec(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) gram[i][j] = gram[j][i] = dot(basis[i], basis[j]);
  // gram^-1 by Gauss-Jordan
  Mat aug(r, Vec(2 * r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) aug[i][j] = gram[i][j];
    aug[i][r + i] = 1;
  }
  rref(aug);
  Mat inv(r, Vec(r));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) inv[i][j] = aug[i][r + j];
  // P = B^T G^-1 B
  Mat bt = transpose(basis);
  if (bt.empty()) return Mat(dim, Vec(dim));
  return multiply(multiply(bt, inv), basis);
}

// ---- graphs

// rows: vertices, columns: edges, +1 at tail, -1 at head
inline Mat incidence(const tcs::RecursiveGraph& g) {
  Mat b(g.vertex_count(), Vec(g.edge_count()));
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    b[g.edge(e).tail][e] += 1;
    b[g.edge(e).head][e] -= 1;
  }
  return b;
}

inline Vec mat_vec(const Mat& m, const Vec& x) {
  Vec y(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) y[i] = dot(m[i], x);
  return y;
}

inline bool is_cycle(const tcs::RecursiveGraph& g, const Vec& x) {
  auto bx = mat_vec(incidence(g), x);
  return std::all_of(bx.begin(), bx.end(), [](const Rational& v) { return v.is_zero(); });
}

// hop distances by Floyd-Warshall
inline std::vector<std::vector<int>> hop_distances(const tcs::RecursiveGraph& g) {
  const std::size_t v = g.vertex_count();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(v, std::vector<int>(v, inf));
  for (std::size_t i = 0; i < v; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.tail][e.head] = d[e.head][e.tail] = 1;
  for (std::size_t k = 0; k < v; ++k)
    for (std::size_t i = 0; i < v; ++i)
      for (std::size_t j = 0; j < v; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

// all simple cycles as signed edge indicators, each once (n <= 2 only)
inline Mat simple_cycle_indicators(const tcs::RecursiveGraph& g) {
  const std::size_t v = g.vertex_count();
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(v);
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    adj[g.edge(e).tail].push_back({g.edge(e).head, e});
    adj[g.edge(e).head].push_back({g.edge(e).tail, e});
  }
  std::set<std::vector<std::uint32_t>> seen;
  Mat out;
  std::vector<bool> on(v, false);
  std::vector<std::pair<std::uint32_t, bool>> path;  // (edge, forward)
  std::function<void(std::uint32_t, std::uint32_t)> dfs = [&](std::uint32_t start, std::uint32_t u) {
    for (auto [w, e] : adj[u]) {
      if (!path.empty() && path.back().first == e) continue;
      const bool fwd = g.edge(e).tail == u;
      if (w == start && path.size() >= 2) {
        std::vector<std::uint32_t> key;
        for (auto& s : path) key.push_back(s.first);
        key.push_back(e);
        std::sort(key.begin(), key.end());
        if (!seen.insert(key).second) continue;
        Vec x(g.edge_count());
        for (auto& s : path) x[s.first] = s.second ? 1 : -1;
        x[e] = fwd ? 1 : -1;
        out.push_back(std::move(x));
        continue;
      }
      if (w <= start || on[w]) continue;
      on[w] = true;
      path.push_back({e, fwd});
      dfs(start, w);
      path.pop_back();
      on[w] = false;
    }
  };
  for (std::uint32_t s = 0; s < v; ++s) {
    on[s] = true;
    dfs(s, s);
    on[s] = false;
  }
  return out;
}

// ---- transport

// exhaustive search over integer plans; integral problems have integral optima
inline Rational integer_transport(const std::vector<int>& supply_at, const std::vector<int>& demand_at,
                                  const std::function<Rational(std::size_t, std::size_t)>& d) {
  std::vector<std::pair<std::size_t, int>> s, t;
  for (std::size_t i = 0; i < supply_at.size(); ++i)
    if (supply_at[i] > 0) s.push_back({i, supply_at[i]});
  for (std::size_t i = 0; i < demand_at.size(); ++i)
    if (demand_at[i] > 0) t.push_back({i, demand_at[i]});
  std::optional<Rational> best;
  std::function<void(std::size_t, Rational)> go = [&](std::size_t si, Rational cost) {
    while (si < s.size() && s[si].second == 0) ++si;
    if (si == s.size()) {
      if (!best || cost < *best) best = cost;
      return;
    }
    for (auto& [tj, left] : t) {
      if (left == 0) continue;
      --left;
      --s[si].second;
      go(si, cost + d(s[si].first, tj));
      ++s[si].second;
      ++left;
    }
  };
  go(0, 0);
  return best.value_or(Rational(0));
}

// weighted tree on m points: random parent links, weights k/4 with k in 1..8
struct Tree {
  std::size_t m;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<Rational> weights;
  std::vector<std::vector<Rational>> dist;
};

inline Tree random_tree(std::mt19937_64& rng, std::size_t m) {
  Tree t{m, {}, {}, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m))};
  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(m);
  for (std::size_t v = 1; v < m; ++v) {
    const auto p = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
    const Rational w(static_cast<long>(std::uniform_int_distribution<int>(1, 8)(rng)), 4L);
    t.edges.push_back({static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(v)});
    t.weights.push_back(w);
    adj[p].push_back({v, w});
    adj[v].push_back({p, w});
  }
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<bool> vis(m, false);
    std::vector<std::size_t> stack{s};
    vis[s] = true;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto& [w, len] : adj[u])
        if (!vis[w]) {
          vis[w] = true;
          t.dist[s][w] = t.dist[s][u] + len;
          stack.push_back(w);
        }
    }
  }
  return t;
}

// TC norm on a tree: sum over edges of weight times |mass on the far side|
inline Rational tree_tc_norm(const Tree& t, const std::vector<Rational>& p) {
  Rational total = 0;
  for (std::size_t i = 0; i < t.edges.size(); ++i) {
    auto [a, b] = t.edges[i];
    // side of b: points closer to b than to a
    Rational mass = 0;
    for (std::size_t x = 0; x < t.m; ++x)
      if (t.dist[x][b] < t.dist[x][a]) mass += p[x];
    total += t.weights[i] * abs(mass);
  }
  return total;
}

}  // namespace oracle
