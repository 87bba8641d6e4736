// One line per acceptance criterion. A criterion passes when the library's
// own verification passes and the independent cross-check below agrees.

#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "../oracles.hpp"
#include "tcs/diamond.hpp"
#include "tcs/embeddings.hpp"
#include "tcs/projections.hpp"
#include "tcs/spaces.hpp"
#include "tcs/transport.hpp"
#include "tcs/verification.hpp"

using namespace tcs;

namespace {

struct Oracle {
  bool ok = true;
  std::ostringstream why;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

void counts(Oracle& o) {
  for (int n = 1; n <= 5; ++n) {
    auto g = build_laakso(n);
    auto c = oracle::laakso_counts(n);
    o.expect(g.edge_count() == c.edges && g.vertex_count() == c.vertices, "laakso counts n=" + std::to_string(n));
  }
  for (int k = 2; k <= 4; ++k)
    for (int n = 1; n <= 4; ++n) {
      auto g = build_diamond(n, k);
      auto c = oracle::diamond_counts(n, k);
      o.expect(g.edge_count() == c.edges && g.vertex_count() == c.vertices, "diamond counts");
    }
}

void basis(Oracle& o) {
  for (int n = 1; n <= 2; ++n) {
    auto g = build_laakso(n);
    OrthogonalBasis b(n);
    auto null = oracle::nullspace(oracle::incidence(g), g.edge_count());
    o.expect(null.size() == b.cycle_count(), "nullspace dimension");
    for (std::size_t i = 0; i < b.cycle_count(); ++i)
      o.expect(oracle::is_cycle(g, b[i].vector.to_dense()), "cycle vector has zero boundary");
    for (std::size_t i = b.cycle_count(); i < b.size(); ++i)
      for (const auto& z : null) o.expect(oracle::dot(b[i].vector.to_dense(), z) == 0, "cut orthogonal to Z");
  }
}

void norm_identities(Oracle& o) {
  for (int n = 1; n <= 5; ++n) {
    // f_n recomputed from its product form: weight 1 on A/F digits, 1/2 on B..E
    auto g = build_laakso(n);
    Rational l1 = 0, l2 = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      Rational w = 1;
      const auto digits = g.edge_address(e).digits();
      for (auto d : digits)
        if (d >= 1 && d <= 4) w /= 2;
      l1 += w;
      l2 += w * w;
    }
    o.expect(l1 == ipow(Rational(4), n) && l2 == ipow(Rational(3), n), "f_n product form");
    o.expect(named_vector(NamedRole::f, n).vector.l1() == l1, "f_n l1");
  }
}

void projection(Oracle& o) {
  for (int n = 2; n <= 3; ++n) {
    auto g = build_laakso(n);
    auto built = build_Pn(n);
    oracle::Mat cols;
    for (std::size_t e = 0; e < g.edge_count(); ++e) cols.push_back(built.op.column(e).to_dense());
    o.expect(oracle::multiply(cols, cols) == cols, "dense P^2 = P at n=" + std::to_string(n));
    for (const auto& c : cols) o.expect(oracle::is_cycle(g, c), "column in Z");
    const auto& top = built.trace.tops[0];
    for (int j = 1; j <= n; ++j)
      o.expect(top.x[j - 1] == Rational(n + 2 - j, 2) * ipow(Rational(4, 3), j - 1), "x_j closed form");
  }
}

void certificate(Oracle& o) {
  for (int n = 1; n <= 3; ++n) {
    auto built = build_Pn(n);
    auto c = lower_bound_certificate(built.op);
    o.expect(built.op.column(c.edge).l1() == c.image_norm, "certificate image norm recomputed");
    o.expect(c.image_norm >= Rational(3 * (n + 1), 8), "certificate bound");
  }
}

void lemmas(Oracle& o) {
  for (int n = 1; n <= 3; ++n) {
    OrthogonalBasis b(n);
    for (std::size_t i = 0; i < b.cycle_count(); ++i) {
      const auto& H = b[i];
      const auto& G = b[b.g_index(H.support)];
      for (std::size_t e = H.support.first_edge(); e < H.support.end_edge(); ++e) {
        const Rational h = H.vector[e], g = G.vector[e];
        o.expect(h.is_zero() == (g < 0), "sign lemma zero pattern");
        if (!h.is_zero()) o.expect(g == abs(h), "sign lemma magnitude");
      }
    }
  }
}

void quotient(Oracle& o) {
  // integral edge vectors on small graphs: TC norm by exhaustive integer plans
  std::mt19937_64 rng(7);
  for (const auto& g : {build_laakso(1), build_diamond(1, 2), build_diamond(1, 3)}) {
    auto d = oracle::hop_distances(g);
    std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
    std::uniform_int_distribution<int> val(-1, 1);
    for (int t = 0; t < 30; ++t) {
      EdgeVector x(g.edge_count(), {{static_cast<std::uint32_t>(edge(rng)), val(rng)},
                                    {static_cast<std::uint32_t>(edge(rng)), val(rng)},
                                    {static_cast<std::uint32_t>(edge(rng)), val(rng)}});
      auto p = boundary(g, x);
      std::vector<int> sup(p.size()), dem(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        long v = numerator(p.values[i]).convert_to<long>();
        (v > 0 ? sup[i] : dem[i]) = static_cast<int>(v > 0 ? v : -v);
      }
      auto ref = oracle::integer_transport(sup, dem, [&](std::size_t a, std::size_t b) { return Rational(d[a][b]); });
      o.expect(quotient_norm(g, x).norm == ref, "quotient vs integer plans");
    }
  }
}

void geodesic(Oracle& o) {
  for (int n = 1; n <= 3; ++n) {
    auto g = build_laakso(n);
    auto gn = named_vector(NamedRole::g, n).vector;
    o.expect(tc_norm(g, boundary(g, gn)).norm == Rational(3, 2) * ipow(Rational(4), n), "|g_n|_tc");
    auto r = badequiv_check(n);
    o.expect(r.lhs <= ipow(Rational(3, 4), n - 1) * Rational(3, 2) * ipow(Rational(4), n), "badequiv bound");
  }
}

void diamond(Oracle& o) {
  for (auto [n, k] : {std::pair{1, 2}, {2, 2}, {1, 3}, {1, 4}}) {
    auto g = build_diamond(n, k);
    oracle::Mat rows;
    for (const auto& e : diamond_cut_basis(n, k)) rows.push_back(to_edge_vector(g, e.vector).to_dense());
    o.expect(oracle::rank(rows) == g.vertex_count() - 1, "cut basis spans the incidence row space");
    auto p = oracle::projection_onto_span(rows, g.edge_count());
    Rational best = 0;
    for (std::size_t c = 0; c < g.edge_count(); ++c) {
      Rational s = 0;
      for (std::size_t r = 0; r < g.edge_count(); ++r) s += abs(p[r][c]);
      best = std::max(best, s);
    }
    const Rational q = 2 * k - 1;
    const Rational f = Rational(2 * k - 2) / q * n + Rational(4 * k * k - 6 * k + 3) / (q * q) +
                       Rational(2 * k - 2) / (q * q) / ipow(Rational(2 * k), n);
    o.expect(best == f, "dense projection norm equals closed form");
  }
}

void embeddings(Oracle& o) {
  for (bool four : {false, true}) {
    auto s = four ? metric_F() : metric_T();
    auto ps = four ? problems_F() : problems_T();
    for (int mask = 0; mask < (1 << ps.size()); ++mask) {
      std::vector<int> sup(s.size()), dem(s.size());
      bool integral = true;
      for (std::size_t x = 0; x < s.size(); ++x) {
        Rational v = 0;
        for (std::size_t i = 0; i < ps.size(); ++i) v += ((mask >> i) & 1 ? -1 : 1) * ps[i].values[x];
        if (denominator(v) != 1) integral = false;
        long w = numerator(v).convert_to<long>();
        (w > 0 ? sup[x] : dem[x]) = static_cast<int>(w > 0 ? w : -w);
      }
      if (!integral) continue;
      o.expect(oracle::integer_transport(sup, dem, [&](std::size_t a, std::size_t b) { return s(a, b); }) == 1,
               "sign pattern norm by plan search");
    }
  }
}

void trees(Oracle& o) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    auto tree = oracle::random_tree(rng, 2 + t % 7);
    std::vector<std::string> names;
    std::vector<Rational> flat;
    for (std::size_t i = 0; i < tree.m; ++i) {
      names.push_back(std::to_string(i));
      for (const auto& v : tree.dist[i]) flat.push_back(v);
    }
    FiniteMetricSpace s(names, flat);
    auto r = is_weighted_tree_metric(s);
    o.expect(r.is_tree && r.edges.size() == tree.m - 1, "random tree classified");
    std::vector<Rational> p(tree.m);
    p.front() = 1;
    p.back() -= 1;
    o.expect(tc_norm(s, TransportProblem{p}).norm == oracle::tree_tc_norm(tree, p), "tree TC closed form");
  }
}

void derived(Oracle& o) {
  for (int n = 1; n <= 3; ++n) {
    auto basis = std::make_shared<const OrthogonalBasis>(n);
    auto pn = operator_l1_norm(build_Pn(basis).op).norm;
    auto orth = operator_l1_norm(orthogonal_projection(basis)).norm;
    o.expect(Rational(3 * (n + 1), 8) <= pn && pn <= Rational(n + 1, 2) && pn <= orth, "bound chain");
  }
}

const std::map<int, std::function<void(Oracle&)>> kOracles{
    {1, counts},   {2, basis},    {3, norm_identities}, {4, projection},  {5, certificate},   {6, lemmas},
    {7, quotient}, {8, geodesic}, {9, diamond},         {10, embeddings}, {11, trees},        {12, derived}};

}  // namespace

int main() {
  VerifyOptions opts;
  opts.max_n = 5;
  opts.enforce_time = true;
  int failed = 0;
  for (int id : criterion_ids()) {
    auto r = run_criterion(id, opts);
    Oracle o;
    try {
      kOracles.at(id)(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    const bool pass = r.pass() && o.ok;
    failed += !pass;
    std::printf("criterion %2d %s  %s  [%zu checks, %.2f s]", id, pass ? "PASS" : "FAIL", r.title.c_str(),
                r.checks.size(), r.seconds);
    if (!r.pass()) std::printf("  library: %s", r.detail().c_str());
    if (!o.ok) std::printf("  oracle: %s", o.why.str().c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
