#include "tcs/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>

#include "tcs/diamond.hpp"
#include "tcs/embeddings.hpp"
#include "tcs/errors.hpp"
#include "tcs/projections.hpp"
#include "tcs/spaces.hpp"
#include "tcs/transport.hpp"

namespace tcs {

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  if (time_limit > 0 && seconds > time_limit) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

std::string CriterionResult::detail() const {
  if (!error.empty()) return error;
  for (const auto& c : checks)
    if (!c.ok) return c.what + ": expected " + c.expected + ", computed " + c.computed;
  if (checks.empty()) return "no checks ran";
  if (time_limit > 0 && seconds > time_limit)
    return "took " + std::to_string(seconds) + " s, limit " + std::to_string(time_limit) + " s";
  return "";
}

namespace {

using Rng = std::mt19937_64;

struct Ctx {
  const VerifyOptions& opts;
  CriterionResult& res;
  Rng rng;

  int cap(int n) const { return std::min(n, opts.max_n); }

  void eq(const std::string& what, const Rational& expected, const Rational& computed) {
    res.checks.push_back({what, to_string(expected), to_string(computed), expected == computed});
  }
  void eq(const std::string& what, std::uint64_t expected, std::uint64_t computed) {
    res.checks.push_back({what, std::to_string(expected), std::to_string(computed), expected == computed});
  }
  void truth(const std::string& what, bool ok, const std::string& computed = "") {
    res.checks.push_back({what, "true", ok ? "true" : (computed.empty() ? "false" : computed), ok});
  }
  void le(const std::string& what, const Rational& lo, const Rational& hi) {
    res.checks.push_back({what, to_string(lo) + " <= " + to_string(hi), to_string(lo) + " vs " + to_string(hi),
                          lo <= hi});
  }
};

std::string nstr(int n) { return "n=" + std::to_string(n); }

Rational random_rational(Rng& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 4);
  return Rational(num(rng), den(rng));
}

EdgeVector random_sparse(Rng& rng, std::size_t dim, int max_terms) {
  std::uniform_int_distribution<int> terms(1, max_terms);
  std::uniform_int_distribution<std::size_t> edge(0, dim - 1);
  std::vector<EdgeVector::Entry> e;
  const int t = terms(rng);
  for (int i = 0; i < t; ++i) e.emplace_back(static_cast<std::uint32_t>(edge(rng)), random_rational(rng));
  return EdgeVector(dim, std::move(e));
}

Rational geometric_sum(long base, int terms) {
  Rational s = 0, p = 1;
  for (int i = 0; i < terms; ++i) {
    s += p;
    p *= base;
  }
  return s;
}

// ---- 1
void counting(Ctx& c) {
  for (int n = 1; n <= c.cap(5); ++n) {
    auto g = build_laakso(n, c.opts.max_edges);
    c.eq("|E(L_n)| " + nstr(n), ipow(6, n), Rational(static_cast<long>(g.edge_count())));
    c.eq("|V(L_n)| " + nstr(n), 2 + 4 * geometric_sum(6, n), Rational(static_cast<long>(g.vertex_count())));
  }
  for (int n = 1; n <= c.cap(4); ++n)
    for (int k = 2; k <= 4; ++k) {
      auto g = build_diamond(n, k, c.opts.max_edges);
      const std::string tag = nstr(n) + " k=" + std::to_string(k);
      c.eq("|E(D_n,k)| " + tag, ipow(Rational(2 * k), n), Rational(static_cast<long>(g.edge_count())));
      c.eq("|V(D_n,k)| " + tag, 2 + k * geometric_sum(2 * k, n), Rational(static_cast<long>(g.vertex_count())));
    }
}

// ---- 2
void basis_correctness(Ctx& c) {
  for (int n = 1; n <= c.cap(4); ++n) {
    OrthogonalBasis b(n, c.opts.max_edges);
    auto g = build_laakso(n, c.opts.max_edges);
    const auto dim = static_cast<long>(b.dim());
    c.eq("cycle count " + nstr(n), (ipow(6, n) - 1) / 5, Rational(static_cast<long>(b.cycle_count())));
    c.eq("cut count " + nstr(n), (4 * ipow(6, n) + 1) / 5, Rational(static_cast<long>(b.size() - b.cycle_count())));
    c.eq("cycle count = |E|-|V|+1 " + nstr(n), Rational(dim - static_cast<long>(g.vertex_count()) + 1),
         Rational(static_cast<long>(b.cycle_count())));
    std::size_t cycles_closed = 0;
    for (std::size_t i = 0; i < b.cycle_count(); ++i)
      if (boundary(g, b[i].vector).is_zero()) ++cycles_closed;
    c.eq("cycle vectors have zero boundary " + nstr(n), b.cycle_count(), cycles_closed);
    std::size_t pairs = 0, bad = 0;
    if (n <= 3) {
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j, ++pairs)
          if (inner(b[i].vector, b[j].vector) != 0) ++bad;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
      while (pairs < 10000) {
        const auto i = pick(c.rng), j = pick(c.rng);
        if (i == j) continue;
        ++pairs;
        if (inner(b[i].vector, b[j].vector) != 0) ++bad;
      }
    }
    c.eq("non-orthogonal pairs among " + std::to_string(pairs) + " " + nstr(n), 0, bad);
  }
}

// ---- 3
void norm_identities(Ctx& c) {
  for (int n = 1; n <= c.cap(5); ++n) {
    auto f = named_vector(NamedRole::f, n, c.opts.max_edges).vector;
    auto g = named_vector(NamedRole::g, n, c.opts.max_edges).vector;
    auto h = named_vector(NamedRole::h, n, c.opts.max_edges).vector;
    const Rational p4 = ipow(4, n), p3 = ipow(3, n), ratio = ipow(Rational(4, 3), n - 1);
    c.eq("|f_n|_1 " + nstr(n), p4, f.l1());
    c.eq("|f_n|_2^2 " + nstr(n), p3, f.l2sq());
    c.eq("|g_n|_1 " + nstr(n), Rational(3, 2) * p4, g.l1());
    c.eq("|g_n|_2^2 " + nstr(n), 2 * p3, g.l2sq());
    c.eq("|h_n|_1 " + nstr(n), p4, h.l1());
    c.eq("|h_n|_2^2 " + nstr(n), Rational(4, 3) * p3, h.l2sq());
    c.eq("|g_n|_1/|g_n|_2^2 " + nstr(n), ratio, g.l1() / g.l2sq());
    c.eq("|h_n|_1/|h_n|_2^2 " + nstr(n), ratio, h.l1() / h.l2sq());
  }
}

// ---- 4
void pn_verification(Ctx& c) {
  for (int n = 1; n <= c.cap(4); ++n) {
    auto built = build_Pn(n, true, c.opts.max_edges);
    const auto& op = built.op;
    const auto& top = built.trace.tops.front();
    auto pc = check_projection_onto_cycles(op);
    c.truth("P_n fixes Z_n " + nstr(n), pc.fixes_cycles, pc.detail);
    c.truth("P_n lands in Z_n " + nstr(n), pc.lands_in_cycle_space, pc.detail);
    c.truth("P_n^2 = P_n " + nstr(n), pc.idempotent, pc.detail);
    if (n >= 2) c.eq("a_{n-1} " + nstr(n), Rational(-1, 8), top.a[n - 2]);
    if (n >= 3) c.eq("a_{n-2} " + nstr(n), Rational(0), top.a[n - 3]);
    for (int j = 1; j <= n; ++j)
      c.eq("x_" + std::to_string(j) + " " + nstr(n), Rational(n + 2 - j, 2) * ipow(Rational(4, 3), j - 1),
           top.x[j - 1]);
    bool positive = true;
    for (const auto& a : top.a) positive = positive && (1 - a) > 0 && (Rational(1, 2) + a) > 0;
    c.truth("min(1-a_j, 1/2+a_j) > 0 " + nstr(n), positive);
    auto ei = check_edge_images(built);
    c.truth("P_n(e) = X_1 on every edge " + nstr(n), ei.ok(), ei.first_failure);
    auto norm = operator_l1_norm(op).norm;
    c.le("3(n+1)/8 <= |P_n|_1 " + nstr(n), Rational(3 * (n + 1), 8), norm);
    c.le("|P_n|_1 <= (n+1)/2 " + nstr(n), norm, Rational(n + 1, 2));
    auto orth = orthogonal_projection(op.basis_ptr());
    const Rational lower = ipow(Rational(4, 3), n - 1);
    c.le("|orth_n|_1 >= (4/3)^(n-1) " + nstr(n), lower, operator_l1_norm(orth).norm);
    const std::size_t eB = SubAddress::root(6, n).child(1).first_edge();
    c.le("|orth_n(e_B)|_1 >= (4/3)^(n-1) " + nstr(n), lower, orth.column(eB).l1());
  }
}

// ---- 5
void lower_bound(Ctx& c) {
  for (int n = 1; n <= c.cap(4); ++n) {
    auto built = build_Pn(n, true, c.opts.max_edges);
    const auto& op = built.op;
    auto cm = check_commutation(op, isometry_generators(op.basis()));
    c.truth("P_n commutes with every generator " + nstr(n), cm.ok(), cm.first_failure);
    if (n == 1) {
      c.truth("full group average fixes P_1", invariant_average(op) == op);
    } else if (n == 2) {
      c.truth("structured average fixes P_2", structured_invariant_average(op) == op);
    }
    auto cert = lower_bound_certificate(op);
    const Rational target(3 * (n + 1), 8);
    c.truth("certificate image equals the chain vector " + nstr(n), cert.image_matches);
    c.le("|P_n(e)|_1 >= 3(n+1)/8 " + nstr(n), target, cert.image_norm);
    c.le("(3/4) x_1 >= 3(n+1)/8 " + nstr(n), target, cert.bound);
    c.le("(3/4) x_1 <= |P_n(e)|_1 " + nstr(n), cert.bound, cert.image_norm);
    c.le("|P_n(e)|_1 <= |P_n|_1 " + nstr(n), cert.image_norm, operator_l1_norm(op).norm);
  }
}

// ---- 6
void lemma_suite(Ctx& c) {
  for (int n = 1; n <= c.cap(3); ++n) {
    OrthogonalBasis b(n, c.opts.max_edges);
    auto s = check_sign_lemma(b);
    c.truth("sign lemma " + nstr(n) + " (" + std::to_string(s.checked) + " cases)", s.ok(), s.first_failure);
    auto ip = check_inner_product_lemma(b);
    c.truth("inner product lemma " + nstr(n) + " (" + std::to_string(ip.checked) + " cases)", ip.ok(),
            ip.first_failure);
    std::size_t trials = 0, bad = 0, restrict_bad = 0, restrict_checked = 0;
    for (const auto& s1 : sub_copies(build_laakso(n, c.opts.max_edges), 1)) {
      auto ch = chain_through(b, s1);
      bool nested = true;
      for (int j = 2; j <= n; ++j) {
        const auto d = ch.copies[j - 2].digits().back();
        nested = nested && d >= 1 && d <= 4;
      }
      if (!nested) continue;  // supp(H_{j-1}) inside supp(H_j) is required
      for (int j = 2; j <= n; ++j, ++restrict_checked)
        if (restricted_l1(b, ch, j) != b[ch.h[j - 1]].vector.l1() / 8) ++restrict_bad;
      for (int t = 0; t < 500; ++t, ++trials) {
        std::vector<Rational> a(n);
        EdgeAccumulator acc(b.dim());
        for (int j = 0; j < n; ++j) {
          a[j] = random_rational(c.rng);
          acc.axpy(a[j], b[ch.h[j]].vector);
        }
        const Rational l1 = acc.take().l1(), cn = chain_norm(b, ch, a);
        if (!(Rational(3, 4) * cn <= l1 && l1 <= cn)) ++bad;
      }
    }
    c.eq("(3/4)|||x||| <= |x|_1 <= |||x||| failures in " + std::to_string(trials) + " trials " + nstr(n), 0, bad);
    if (n >= 2)
      c.eq("|H_j on supp H_{j-1}|_1 = |H_j|_1/8 failures in " + std::to_string(restrict_checked) + " " + nstr(n), 0,
           restrict_bad);
  }
}

// ---- 7
void quotient_oracle(Ctx& c) {
  std::vector<RecursiveGraph> graphs;
  for (int n = 1; n <= c.cap(3); ++n) graphs.push_back(build_laakso(n, c.opts.max_edges));
  for (auto [n, k] : {std::pair{1, 2}, {2, 2}, {3, 2}, {1, 3}, {2, 3}})
    if (n <= c.opts.max_n) graphs.push_back(build_diamond(n, k, c.opts.max_edges));
  for (const auto& g : graphs) {
    const std::string tag = g.kind_name() + " n=" + std::to_string(g.level()) +
                            (g.kind() == GraphKind::diamond ? " k=" + std::to_string(g.branching()) : "");
    std::size_t exact_bad = 0;
    double worst = 0;
    for (int t = 0; t < 200; ++t) {
      auto x = random_sparse(c.rng, g.edge_count(), 6);
      auto p = boundary(g, x);
      const Rational q = quotient_norm(g, x).norm;
      const Rational tc = tc_norm(g, p).norm;
      if (q != tc) ++exact_bad;
      const double ref = to_double(tc);
      worst = std::max({worst, std::fabs(quotient_norm_double(g, x) - ref), std::fabs(tc_norm_double(g, p).norm - ref)});
    }
    c.eq("quotient != tc (exact) on 200 vectors, " + tag, 0, exact_bad);
    c.res.checks.push_back({"float backends within 1e-9, " + tag, "<= 1e-9", std::to_string(worst), worst <= 1e-9});
  }
}

// ---- 8
void g_norms(Ctx& c) {
  for (int n = 1; n <= c.cap(3); ++n) {
    auto g = build_laakso(n, c.opts.max_edges);
    auto gn = named_vector(NamedRole::g, n, c.opts.max_edges).vector;
    c.eq("|g_n|_tc (transport) " + nstr(n), gn.l1(), tc_norm(g, boundary(g, gn)).norm);
    c.eq("|g_n|_tc (quotient) " + nstr(n), gn.l1(), quotient_norm(g, gn).norm);
    auto be = badequiv_check(n, c.opts.max_edges);
    c.le("badequiv lhs <= (3/4)^(n-1)|g_n|_1 " + nstr(n), be.lhs, be.rhs);
    c.eq("(3/4)^(n-1)|g_n|_1 " + nstr(n), ipow(Rational(3, 4), n - 1) * Rational(3, 2) * ipow(4, n), be.rhs);
    c.truth("each level multiplies |.|_1 by 3/4 " + nstr(n), be.steps_exact);
    if (n >= 2) c.eq("|g_n - (1/2) sum eps g_{n-1}|_1 " + nstr(n), Rational(3, 4) * gn.l1(), be.l1_steps[1]);
  }
}

// ---- 9
void diamond_exact(Ctx& c) {
  for (int n = 1; n <= c.cap(4); ++n)
    for (int k = 2; k <= 4; ++k) {
      const std::string tag = nstr(n) + " k=" + std::to_string(k);
      try {
        auto r = lambda_diamond(n, k, c.opts.max_edges);
        c.eq("|P_n,k|_1 " + tag, r.formula, r.computed);
        c.truth("columns equidistributed " + tag, r.columns_equal);
      } catch (const VerificationError& e) {
        c.truth("|P_n,k|_1 " + tag, false, e.what());
      }
    }
  c.eq("lambda(Lip_0(D_1,2))", Rational(3, 2), lambda_diamond(1, 2).computed);
}

// ---- 10
void linfty(Ctx& c) {
  for (auto [name, space, probs] : {std::tuple{"T", metric_T(), problems_T()}, {"F", metric_F(), problems_F()}}) {
    auto r = verify_linfty(space, probs);
    c.eq(std::string("sign patterns on ") + name, std::uint64_t{1} << probs.size(), r.patterns);
    c.eq(std::string("max |norm - 1| on ") + name, Rational(0), r.max_deviation);
    c.eq(std::string("rank of problems on ") + name, probs.size(), r.rank);
  }
}

// ---- 11
FiniteMetricSpace random_tree(Rng& rng, std::size_t m, std::set<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  std::vector<std::vector<std::pair<std::uint32_t, Rational>>> adj(m);
  std::uniform_int_distribution<int> num(1, 12), den(1, 3);
  for (std::uint32_t v = 1; v < m; ++v) {
    std::uniform_int_distribution<std::uint32_t> par(0, v - 1);
    const auto u = par(rng);
    Rational w(num(rng), den(rng));
    adj[u].push_back({v, w});
    adj[v].push_back({u, w});
    edges.insert({u, v});
  }
  std::vector<Rational> d(m * m);
  for (std::uint32_t s = 0; s < m; ++s) {
    std::vector<char> seen(m, 0);
    std::vector<std::uint32_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (const auto& [v, w] : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          d[s * m + v] = d[s * m + u] + w;
          stack.push_back(v);
        }
    }
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.push_back(std::to_string(i));
  return {std::move(names), std::move(d)};
}

void trees(Ctx& c) {
  std::uniform_int_distribution<std::size_t> size(2, 8);
  std::size_t classified = 0, count_ok = 0, edges_ok = 0, flow_ok = 0;
  for (int t = 0; t < 100; ++t) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    const auto m = size(c.rng);
    auto space = random_tree(c.rng, m, edges);
    auto tc = is_weighted_tree_metric(space);
    if (tc.is_tree) ++classified;
    if (tc.edges.size() == m - 1 && extreme_pair_count(space) == m - 1) ++count_ok;
    if (std::set<std::pair<std::uint32_t, std::uint32_t>>(tc.edges.begin(), tc.edges.end()) == edges) ++edges_ok;
    // l1 identification of TC on a tree
    TransportProblem p{std::vector<Rational>(m)};
    for (std::size_t i = 0; i + 1 < m; ++i) {
      p.values[i] = random_rational(c.rng);
      p.values[m - 1] -= p.values[i];
    }
    Rational via_tree = 0;
    auto flows = tree_edge_flows(space, tc.edges, p);
    for (std::size_t e = 0; e < flows.size(); ++e) via_tree += abs(flows[e]) * space(tc.edges[e].first, tc.edges[e].second);
    if (via_tree == tc_norm(space, p).norm) ++flow_ok;
  }
  c.eq("random trees classified as trees", 100, classified);
  c.eq("essential-edge count m-1", 100, count_ok);
  c.eq("essential edges reconstruct the tree", 100, edges_ok);
  c.eq("tc norm equals weighted l1 of edge flows", 100, flow_ok);
  {
    std::vector<Rational> d(16);
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v) {
        const int k = std::abs(u - v);
        d[u * 4 + v] = std::min(k, 4 - k);
      }
    FiniteMetricSpace c4({"0", "1", "2", "3"}, d);
    auto r = is_weighted_tree_metric(c4);
    c.truth("C_4 is not a tree metric", !r.is_tree);
    c.eq("C_4 essential edges", 4, r.edges.size());
  }
  {
    auto l1 = shortest_path_metric(build_laakso(1));
    auto r = is_weighted_tree_metric(l1);
    c.truth("L_1 is not a tree metric", !r.is_tree);
  }
}

// ---- 12
void derived_bounds(Ctx& c) {
  for (int n = 1; n <= c.cap(4); ++n) {
    auto built = build_Pn(n, false, c.opts.max_edges);
    auto norm = operator_l1_norm(built.op).norm;
    auto cert = lower_bound_certificate(built.op);
    auto orth = operator_l1_norm(orthogonal_projection(built.op.basis_ptr())).norm;
    const Rational lo(3 * (n + 1), 8), hi(n + 1, 2);
    c.le("3(n+1)/8 <= certificate " + nstr(n), lo, cert.image_norm);
    c.le("certificate <= |P_n|_1 " + nstr(n), cert.image_norm, norm);
    c.le("|P_n|_1 <= (n+1)/2 " + nstr(n), norm, hi);
    c.le("|P_n|_1 <= |orth_n|_1 " + nstr(n), norm, orth);
  }
}

struct Entry {
  int id;
  const char* title;
  double limit;
  void (*run)(Ctx&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {1, "counting identities", 1.0, counting},
      {2, "basis cardinality and orthogonality", 60.0, basis_correctness},
      {3, "norm identities of f_n, g_n, h_n", 0, norm_identities},
      {4, "P_n is a projection with the stated recursion and bounds", 300.0, pn_verification},
      {5, "lower-bound certificate", 0, lower_bound},
      {6, "lemma suite", 0, lemma_suite},
      {7, "quotient norm equals transportation cost", 0, quotient_oracle},
      {8, "|g_n|_tc and the badequiv combination", 0, g_norms},
      {9, "diamond projection constant", 0, diamond_exact},
      {10, "l_inf^3 in TC(T) and l_inf^4 in TC(F)", 1.0, linfty},
      {11, "tree characterization", 0, trees},
      {12, "derived bounds on projection norms", 0, derived_bounds},
  };
  return r;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& e : registry()) ids.push_back(e.id);
  return ids;
}

std::string criterion_title(int id) {
  for (const auto& e : registry())
    if (e.id == id) return e.title;
  throw DomainError("no criterion " + std::to_string(id));
}

CriterionResult run_criterion(int id, const VerifyOptions& opts) {
  const Entry* entry = nullptr;
  for (const auto& e : registry())
    if (e.id == id) entry = &e;
  if (!entry) throw DomainError("no criterion " + std::to_string(id));
  CriterionResult res;
  res.id = id;
  res.title = entry->title;
  res.time_limit = opts.enforce_time ? entry->limit : 0;
  Ctx ctx{opts, res, Rng(opts.seed + static_cast<std::uint64_t>(id))};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    entry->run(ctx);
  } catch (const std::exception& e) {
    res.error = e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<CriterionResult> run_all(const VerifyOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id : criterion_ids()) out.push_back(run_criterion(id, opts));
  return out;
}

}  // namespace tcs
