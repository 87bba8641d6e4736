#include "tcs/spaces.hpp"

#include <algorithm>

#include "tcs/errors.hpp"

namespace tcs {

namespace {

std::size_t pow6(int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= 6;
  return r;
}

// f_{j} as a dense vector over the 6^j edges of L_j (f_0 = [1]).
std::vector<Rational> dense_f(int j) {
  std::vector<Rational> f{Rational(1)};
  const auto& w = propagation_weights();
  for (int l = 0; l < j; ++l) {
    std::vector<Rational> next;
    next.reserve(f.size() * 6);
    for (const auto& c : f)
      for (int d = 0; d < 6; ++d) next.push_back(c * w[d]);
    f = std::move(next);
  }
  return f;
}

// value on (copy, d1, suffix) = pattern[d1] * f_{j-1}[suffix]
EdgeVector patterned(std::size_t dim, const SubAddress& copy, const std::array<Rational, 6>& pattern,
                     const std::vector<Rational>& f_below) {
  std::vector<EdgeVector::Entry> entries;
  const std::size_t block = f_below.size();
  const std::size_t first = copy.first_edge();
  for (std::size_t d = 0; d < 6; ++d) {
    if (pattern[d] == 0) continue;
    for (std::size_t s = 0; s < block; ++s)
      entries.emplace_back(static_cast<std::uint32_t>(first + d * block + s), pattern[d] * f_below[s]);
  }
  return EdgeVector(dim, std::move(entries));
}

std::vector<SubAddress> copies_at(int n, int j) {
  std::vector<SubAddress> out;
  const int len = n - j;
  const std::size_t count = pow6(len);
  out.reserve(count);
  std::vector<std::uint8_t> digits(len);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t idx = c;
    for (int i = len - 1; i >= 0; --i) {
      digits[i] = static_cast<std::uint8_t>(idx % 6);
      idx /= 6;
    }
    out.emplace_back(6, n, digits);
  }
  return out;
}

bool in_cycle_support(std::uint8_t digit) { return digit >= 1 && digit <= 4; }

}  // namespace

std::string to_string(BasisClass cls) {
  switch (cls) {
    case BasisClass::cycle_H: return "cycle-H";
    case BasisClass::cycle_top_h: return "cycle-top-h";
    case BasisClass::cut_G: return "cut-G";
    case BasisClass::cut_nonspecial: return "cut-nonspecial";
    case BasisClass::cut_f: return "cut-f-propagated";
  }
  return "?";
}

std::string BasisElement::label() const {
  switch (cls) {
    case BasisClass::cycle_H:
    case BasisClass::cycle_top_h: return "H@" + support.to_string();
    case BasisClass::cut_G: return "G@" + support.to_string();
    case BasisClass::cut_nonspecial: return "N" + std::to_string(row) + "@" + support.to_string();
    case BasisClass::cut_f: return "f";
  }
  return "?";
}

const std::array<std::array<Rational, 6>, 5>& laakso_cut_rows() {
  static const std::array<std::array<Rational, 6>, 5> rows = [] {
    std::array<std::array<Rational, 6>, 5> r;
    r[0] = {-1, 1, 1, 1, 1, -1};
    r[1] = {1, 0, 0, 0, 0, -1};
    r[2] = {0, 1, -1, 0, 0, 0};
    r[3] = {0, 0, 0, 1, -1, 0};
    r[4] = {1, Rational(1, 2), Rational(1, 2), Rational(1, 2), Rational(1, 2), 1};
    return r;
  }();
  return rows;
}

const std::array<Rational, 6>& laakso_h1() {
  static const std::array<Rational, 6> h{0, 1, 1, -1, -1, 0};
  return h;
}

std::vector<BasisElement> cycle_basis(int n, std::size_t max_edges) {
  if (n < 1) throw DomainError("cycle basis needs n >= 1");
  const std::size_t dim = checked_edge_count(6, n, max_edges);
  std::vector<BasisElement> out;
  for (int j = n; j >= 1; --j) {
    auto f_below = dense_f(j - 1);
    for (auto& copy : copies_at(n, j)) {
      auto v = patterned(dim, copy, laakso_h1(), f_below);
      out.push_back({std::move(v), j == n ? BasisClass::cycle_top_h : BasisClass::cycle_H, copy, j, 0});
    }
  }
  return out;
}

std::vector<BasisElement> cut_basis(int n, std::size_t max_edges) {
  if (n < 1) throw DomainError("cut basis needs n >= 1");
  const std::size_t dim = checked_edge_count(6, n, max_edges);
  const auto& rows = laakso_cut_rows();
  std::vector<BasisElement> out;
  auto root = SubAddress::root(6, n);
  out.push_back({patterned(dim, root, rows[4], dense_f(n - 1)), BasisClass::cut_f, root, n, 5});
  for (int j = n; j >= 1; --j) {
    auto f_below = dense_f(j - 1);
    for (auto& copy : copies_at(n, j)) {
      out.push_back({patterned(dim, copy, rows[0], f_below), BasisClass::cut_G, copy, j, 1});
      for (int r = 2; r <= 4; ++r)
        out.push_back({patterned(dim, copy, rows[r - 1], f_below), BasisClass::cut_nonspecial, copy, j, r});
    }
  }
  return out;
}

OrthogonalBasis::OrthogonalBasis(int n, std::size_t max_edges) : n_(n) {
  dim_ = checked_edge_count(6, n, max_edges);
  elements_ = cycle_basis(n, max_edges);
  cycle_count_ = elements_.size();
  auto cuts = cut_basis(n, max_edges);
  std::move(cuts.begin(), cuts.end(), std::back_inserter(elements_));
  norm2_.reserve(elements_.size());
  std::vector<std::size_t> counts(dim_ + 1, 0);
  for (const auto& b : elements_) {
    norm2_.push_back(b.vector.l2sq());
    for (const auto& [e, v] : b.vector.entries()) ++counts[e + 1];
  }
  for (std::size_t e = 0; e < dim_; ++e) counts[e + 1] += counts[e];
  incidence_start_ = counts;
  incidence_.resize(counts[dim_]);
  auto pos = counts;
  for (std::uint32_t i = 0; i < elements_.size(); ++i)
    for (const auto& [e, v] : elements_[i].vector.entries()) incidence_[pos[e]++] = {i, v};
}

std::span<const OrthogonalBasis::Incidence> OrthogonalBasis::incidence(std::size_t edge) const {
  return {incidence_.data() + incidence_start_[edge], incidence_.data() + incidence_start_[edge + 1]};
}

std::vector<std::pair<std::uint32_t, Rational>> OrthogonalBasis::coefficients(const EdgeVector& x) const {
  if (x.dim() != dim_) throw DomainError("dimension mismatch");
  std::vector<std::pair<std::uint32_t, Rational>> acc;
  for (const auto& [e, v] : x.entries())
    for (const auto& inc : incidence(e)) acc.emplace_back(inc.element, v * inc.value);
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<std::uint32_t, Rational>> out;
  for (auto& [i, v] : acc) {
    if (!out.empty() && out.back().first == i) {
      out.back().second += v;
    } else {
      out.emplace_back(i, std::move(v));
    }
  }
  std::erase_if(out, [](const auto& p) { return p.second == 0; });
  for (auto& [i, v] : out) v /= norm2_[i];
  return out;
}

std::size_t OrthogonalBasis::level_offset(int j) const {
  std::size_t off = 0;
  for (int i = n_; i > j; --i) off += pow6(n_ - i);
  return off;
}

std::size_t OrthogonalBasis::copy_index(const SubAddress& copy) const {
  if (copy.arity() != 6 || copy.graph_level() != n_) throw DomainError("address does not belong to this graph");
  if (copy.level() < 1) throw DomainError("basis vectors live on sub-copies of level >= 1");
  return level_offset(copy.level()) + copy.first_edge() / copy.edge_count();
}

std::size_t OrthogonalBasis::h_index(const SubAddress& copy) const { return copy_index(copy); }

std::size_t OrthogonalBasis::g_index(const SubAddress& copy) const { return cycle_count_ + 1 + 4 * copy_index(copy); }

std::size_t OrthogonalBasis::nonspecial_index(const SubAddress& copy, int row) const {
  if (row < 2 || row > 4) throw DomainError("non-special rows are 2, 3, 4");
  return cycle_count_ + 1 + 4 * copy_index(copy) + (row - 1);
}

NamedVector named_vector(NamedRole role, int n, std::size_t max_edges) {
  if (n < 1) throw DomainError("named vectors need n >= 1");
  checked_edge_count(6, n, max_edges);
  std::vector<Rational> base(6);
  const auto& src = role == NamedRole::f ? laakso_cut_rows()[4] : role == NamedRole::g ? laakso_cut_rows()[0] : laakso_h1();
  std::copy(src.begin(), src.end(), base.begin());
  auto v = propagate(EdgeVector::from_dense(base), n - 1, max_edges);
  return {role, n, std::move(v)};
}

Chain chain(const OrthogonalBasis& basis, const std::vector<SubAddress>& copies) {
  const int n = basis.level();
  if (static_cast<int>(copies.size()) != n) throw DomainError("chain needs exactly n sub-copies");
  Chain c;
  for (int j = 1; j <= n; ++j) {
    const auto& s = copies[j - 1];
    if (s.level() != j) throw DomainError("chain entry " + std::to_string(j) + " is not a sub-L_" + std::to_string(j));
    if (j > 1 && !s.contains(copies[j - 2])) throw DomainError("chain is not nested at level " + std::to_string(j));
    c.copies.push_back(s);
    c.g.push_back(basis.g_index(s));
    c.h.push_back(basis.h_index(s));
  }
  return c;
}

Chain chain_through(const OrthogonalBasis& basis, const SubAddress& s1) {
  if (s1.level() != 1) throw DomainError("chain_through needs a level-1 copy");
  std::vector<SubAddress> copies{s1};
  while (copies.back().level() < basis.level()) copies.push_back(copies.back().parent());
  return chain(basis, copies);
}

LemmaReport check_sign_lemma(const OrthogonalBasis& basis) {
  LemmaReport rep;
  const int n = basis.level();
  for (int j = 1; j <= n; ++j) {
    for (const auto& copy : copies_at(n, j)) {
      const auto& G = basis[basis.g_index(copy)].vector;
      const auto& H = basis[basis.h_index(copy)].vector;
      for (std::size_t e = copy.first_edge(); e < copy.end_edge(); ++e) {
        ++rep.checked;
        Rational he = H[e], ge = G[e];
        bool ok = (he == 0) == (ge < 0);
        if (he != 0) ok = ok && ge > 0 && abs(he) == ge;
        if (!ok) {
          if (rep.failures++ == 0) rep.first_failure = "edge " + std::to_string(e) + " in copy '" + copy.to_string() + "'";
        }
      }
    }
  }
  return rep;
}

std::vector<int> alpha_counts(const OrthogonalBasis& basis, std::size_t edge) {
  const int n = basis.level();
  // digit[r] = digit of S_{r-1} inside S_r, r = 1..n (S_0 = {edge})
  std::vector<int> alpha(n, 0);
  std::vector<std::uint8_t> full(n);
  std::size_t idx = edge;
  for (int i = n - 1; i >= 0; --i) {
    full[i] = static_cast<std::uint8_t>(idx % 6);
    idx /= 6;
  }
  // S_r has address full[0 .. n-r), the digit of S_{r-1} inside S_r is full[n-r]
  for (int j = 2; j <= n; ++j) {
    int count = 0;
    for (int r = 1; r < j; ++r)
      if (in_cycle_support(full[n - r])) ++count;
    alpha[j - 1] = count;
  }
  return alpha;
}

LemmaReport check_inner_product_lemma(const OrthogonalBasis& basis) {
  LemmaReport rep;
  const int n = basis.level();
  for (const auto& s1 : copies_at(n, 1)) {
    auto c = chain_through(basis, s1);
    for (std::size_t e = s1.first_edge(); e < s1.end_edge(); ++e) {
      auto alpha = alpha_counts(basis, e);
      for (int j = 1; j <= n; ++j) {
        const Rational scale = ipow(Rational(1, 2), alpha[j - 1]);
        for (auto idx : {c.g[j - 1], c.h[j - 1]}) {
          ++rep.checked;
          Rational v = basis[idx].vector[e];
          if (v != scale * sgn(v)) {
            if (rep.failures++ == 0)
              rep.first_failure = basis[idx].label() + " at edge " + std::to_string(e);
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace tcs
