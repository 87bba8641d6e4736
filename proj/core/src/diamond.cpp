#include "tcs/diamond.hpp"

#include <algorithm>
#include <map>

#include "tcs/errors.hpp"
#include "tcs/parallel.hpp"

namespace tcs {

std::uint64_t diamond_cells(int i, int k) {
  std::uint64_t c = 1;
  for (int t = 0; t < i; ++t) c *= static_cast<std::uint64_t>(2 * k);
  return c;
}

namespace {

void check_params(int n, int k) {
  if (n < 1) throw DomainError("diamond level must be at least 1");
  if (k < 2) throw DomainError("diamond branching must be at least 2");
}

std::uint64_t checked_cells(int n, int k, std::size_t max_cells) {
  check_params(n, k);
  return checked_edge_count(2 * k, n, max_cells);
}

}  // namespace

AtomVector::AtomVector(int n, int k, std::size_t max_cells) : n_(n), k_(k), cells_(checked_cells(n, k, max_cells)) {}

AtomVector::AtomVector(int n, int k, std::vector<Segment> segments, std::size_t max_cells)
    : n_(n), k_(k), cells_(checked_cells(n, k, max_cells)), segs_(std::move(segments)) {
  normalize();
}

AtomVector AtomVector::from_dense(int n, int k, const std::vector<Rational>& values) {
  AtomVector a(n, k, values.size() + 1);
  if (values.size() != a.cells_) throw DomainError("dense vector has wrong length");
  for (std::uint64_t c = 0; c < values.size(); ++c)
    if (values[c] != 0) a.segs_.push_back({c, c + 1, values[c]});
  a.normalize();
  return a;
}

void AtomVector::normalize() {
  std::sort(segs_.begin(), segs_.end(), [](const Segment& a, const Segment& b) { return a.begin < b.begin; });
  std::vector<Segment> out;
  for (auto& s : segs_) {
    if (s.begin >= s.end || s.end > cells_) throw DomainError("segment outside [0, cells)");
    if (!out.empty() && s.begin < out.back().end) throw DomainError("segments overlap");
    if (s.value == 0) continue;
    if (!out.empty() && out.back().end == s.begin && out.back().value == s.value) {
      out.back().end = s.end;
    } else {
      out.push_back(std::move(s));
    }
  }
  segs_ = std::move(out);
}

void AtomVector::check_same(const AtomVector& other) const {
  if (other.n_ != n_ || other.k_ != k_) throw DomainError("atom vectors live on different grids");
}

Rational AtomVector::value_at(std::uint64_t cell) const {
  auto it = std::upper_bound(segs_.begin(), segs_.end(), cell,
                             [](std::uint64_t c, const Segment& s) { return c < s.begin; });
  if (it == segs_.begin()) return 0;
  --it;
  return cell < it->end ? it->value : Rational(0);
}

std::vector<Rational> AtomVector::to_dense() const {
  std::vector<Rational> out(cells_);
  for (const auto& s : segs_)
    for (auto c = s.begin; c < s.end; ++c) out[c] = s.value;
  return out;
}

Rational AtomVector::l1() const {
  Rational s = 0;
  for (const auto& seg : segs_) s += abs(seg.value) * static_cast<long>(seg.end - seg.begin);
  return s * cell_width();
}

Rational AtomVector::linf() const {
  Rational m = 0;
  for (const auto& seg : segs_) m = std::max(m, Rational(abs(seg.value)));
  return m;
}

namespace {

// walks the union of breakpoints of two step functions
template <class F>
void merge_walk(const AtomVector& a, const AtomVector& b, F&& visit) {
  const auto& x = a.segments();
  const auto& y = b.segments();
  std::vector<std::uint64_t> cuts{0, a.cells()};
  for (const auto& s : x) {
    cuts.push_back(s.begin);
    cuts.push_back(s.end);
  }
  for (const auto& s : y) {
    cuts.push_back(s.begin);
    cuts.push_back(s.end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t i = 0, j = 0;
  const Rational zero = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const auto lo = cuts[c], hi = cuts[c + 1];
    while (i < x.size() && x[i].end <= lo) ++i;
    while (j < y.size() && y[j].end <= lo) ++j;
    const Rational& u = i < x.size() && x[i].begin <= lo ? x[i].value : zero;
    const Rational& v = j < y.size() && y[j].begin <= lo ? y[j].value : zero;
    visit(lo, hi, u, v);
  }
}

}  // namespace

AtomVector& AtomVector::operator+=(const AtomVector& other) {
  check_same(other);
  std::vector<Segment> out;
  merge_walk(*this, other, [&](std::uint64_t lo, std::uint64_t hi, const Rational& u, const Rational& v) {
    Rational s = u + v;
    if (s != 0) out.push_back({lo, hi, std::move(s)});
  });
  segs_ = std::move(out);
  normalize();
  return *this;
}

AtomVector& AtomVector::operator-=(const AtomVector& other) {
  AtomVector neg = other;
  neg *= Rational(-1);
  return *this += neg;
}

AtomVector& AtomVector::operator*=(const Rational& c) {
  if (c == 0) {
    segs_.clear();
    return *this;
  }
  for (auto& s : segs_) s.value *= c;
  return *this;
}

Rational inner(const AtomVector& a, const AtomVector& b) {
  if (a.n() != b.n() || a.k() != b.k()) throw DomainError("atom vectors live on different grids");
  Rational s = 0;
  merge_walk(a, b, [&](std::uint64_t lo, std::uint64_t hi, const Rational& u, const Rational& v) {
    if (u != 0 && v != 0) s += u * v * static_cast<long>(hi - lo);
  });
  return s * a.cell_width();
}

AtomVector diamond_edge_vector(int n, int k, std::uint64_t j) {
  const auto cells = diamond_cells(n, k);
  if (j >= cells) throw DomainError("cell index out of range");
  return AtomVector(n, k, {{j, j + 1, Rational(static_cast<long>(cells))}}, cells);
}

std::vector<AtomVector> diamond_edge_vectors(int n, int k, std::size_t max_cells) {
  const auto cells = checked_cells(n, k, max_cells);
  std::vector<AtomVector> out;
  out.reserve(cells);
  for (std::uint64_t j = 0; j < cells; ++j) out.push_back(diamond_edge_vector(n, k, j));
  return out;
}

namespace {

// level-i cell c (1-based) as finest cells
std::pair<std::uint64_t, std::uint64_t> level_cell(int n, int k, int i, std::uint64_t c) {
  const auto w = diamond_cells(n - i, k);
  return {(c - 1) * w, c * w};
}

}  // namespace

std::vector<DiamondElement> diamond_cut_basis(int n, int k, std::size_t max_cells) {
  const auto cells = checked_cells(n, k, max_cells);
  std::vector<DiamondElement> out;
  out.push_back({AtomVector(n, k, {{0, cells, Rational(1)}}, max_cells), 0, 1});
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t count = static_cast<std::uint64_t>(k) * diamond_cells(i - 1, k);
    for (std::uint64_t j = 1; j <= count; ++j) {
      auto [a0, a1] = level_cell(n, k, i, 2 * j - 1);
      auto [b0, b1] = level_cell(n, k, i, 2 * j);
      out.push_back({AtomVector(n, k, {{a0, a1, Rational(1)}, {b0, b1, Rational(-1)}}, max_cells), i, j});
    }
  }
  return out;
}

std::vector<DiamondElement> diamond_cycle_system(int n, int k, std::size_t max_cells) {
  checked_cells(n, k, max_cells);
  std::vector<DiamondElement> out;
  const std::uint64_t K = static_cast<std::uint64_t>(k);
  for (int i = 1; i <= n; ++i) {
    for (std::uint64_t a = 0; a < diamond_cells(i - 1, k); ++a)
      for (std::uint64_t b = 1; b + 1 <= K; ++b) {
        const std::uint64_t base = 2 * K * a + 2 * b;
        auto plus = level_cell(n, k, i, base - 1);
        auto minus = level_cell(n, k, i, base + 1);
        std::vector<AtomVector::Segment> segs{{plus.first, plus.second + (plus.second - plus.first), Rational(1)},
                                              {minus.first, minus.second + (minus.second - minus.first), Rational(-1)}};
        out.push_back({AtomVector(n, k, std::move(segs), max_cells), i, a * (K - 1) + b});
      }
  }
  return out;
}

AtomVector project_cut(const AtomVector& x) {
  const int n = x.n(), k = x.k();
  const auto N = x.cells();
  const Rational w = x.cell_width();
  Rational c0 = 0;
  // (level, pair) -> <x, h_{i,pair}>, pair 0-based
  std::map<std::pair<int, std::uint64_t>, Rational> ip;
  for (const auto& s : x.segments()) {
    c0 += s.value * static_cast<long>(s.end - s.begin);
    for (int i = 1; i <= n; ++i) {
      const auto W = diamond_cells(n - i, k);
      const std::uint64_t first = s.begin / (2 * W), last = (s.end - 1) / (2 * W);
      for (std::uint64_t q : {first, last}) {
        const std::uint64_t p0 = 2 * q * W, p1 = p0 + W, p2 = p1 + W;
        auto overlap = [&](std::uint64_t lo, std::uint64_t hi) -> long {
          const auto a = std::max(lo, s.begin), b = std::min(hi, s.end);
          return a < b ? static_cast<long>(b - a) : 0L;
        };
        const long d = overlap(p0, p1) - overlap(p1, p2);
        if (d != 0) ip[{i, q}] += s.value * d;
        if (first == last) break;
      }
    }
  }
  c0 *= w;
  std::map<std::uint64_t, Rational> delta;
  if (c0 != 0) {
    delta[0] += c0;
    delta[N] -= c0;
  }
  for (const auto& [key, v] : ip) {
    if (v == 0) continue;
    const auto W = diamond_cells(n - key.first, k);
    // <x,h> w / |h|^2 with |h|^2 = 2 W w
    const Rational c = v / (2 * static_cast<long>(W));
    const std::uint64_t p0 = 2 * key.second * W;
    delta[p0] += c;
    delta[p0 + W] -= 2 * c;
    delta[p0 + 2 * W] += c;
  }
  std::vector<AtomVector::Segment> segs;
  Rational run = 0;
  std::uint64_t pos = 0;
  for (const auto& [at, d] : delta) {
    if (at > pos && run != 0) segs.push_back({pos, at, run});
    run += d;
    pos = at;
  }
  return AtomVector(n, k, std::move(segs), N);
}

AtomVector project_cut_naive(const std::vector<DiamondElement>& basis, const AtomVector& x) {
  AtomVector out(x.n(), x.k(), x.cells());
  for (const auto& h : basis) {
    const Rational c = inner(x, h.vector) / inner(h.vector, h.vector);
    if (c != 0) out += c * h.vector;
  }
  return out;
}

Rational lambda_formula(int n, int k) {
  check_params(n, k);
  const Rational K(k);
  const Rational d = 2 * K - 1;
  return (2 * K - 2) * n / d + (4 * K * K - 6 * K + 3) / (d * d) + (2 * K - 2) / (d * d * ipow(2 * K, n));
}

LambdaReport lambda_diamond(int n, int k, std::size_t max_cells) {
  const auto cells = checked_cells(n, k, max_cells);
  LambdaReport rep;
  rep.n = n;
  rep.k = k;
  std::vector<Rational> norms(cells);
  parallel_for(cells, [&](std::size_t j) { norms[j] = project_cut(diamond_edge_vector(n, k, j)).l1(); });
  rep.computed = norms[0];
  rep.witness_cell = 0;
  rep.columns_equal = true;
  for (std::uint64_t j = 1; j < cells; ++j) {
    if (norms[j] != norms[0]) rep.columns_equal = false;
    if (norms[j] > rep.computed) {
      rep.computed = norms[j];
      rep.witness_cell = j;
    }
  }
  rep.formula = lambda_formula(n, k);
  if (!rep.match())
    throw VerificationError("|P_{n,k}|_1 = " + to_string(rep.computed) + " but the closed form gives " +
                            to_string(rep.formula));
  return rep;
}

std::vector<std::pair<Rational, std::uint64_t>> column_distribution(int n, int k, std::uint64_t j) {
  auto p = project_cut(diamond_edge_vector(n, k, j));
  std::map<Rational, std::uint64_t> m;
  std::uint64_t covered = 0;
  for (const auto& s : p.segments()) {
    m[abs(s.value)] += s.end - s.begin;
    covered += s.end - s.begin;
  }
  if (covered < p.cells()) m[Rational(0)] += p.cells() - covered;
  return {m.begin(), m.end()};
}

EdgeVector to_edge_vector(const RecursiveGraph& g, const AtomVector& x) {
  if (g.kind() != GraphKind::diamond || g.level() != x.n() || g.branching() != x.k())
    throw DomainError("graph does not match the atom grid");
  std::vector<EdgeVector::Entry> entries;
  const Rational w = x.cell_width();
  for (const auto& s : x.segments())
    for (auto c = s.begin; c < s.end; ++c) entries.emplace_back(static_cast<std::uint32_t>(c), s.value * w);
  return EdgeVector(g.edge_count(), std::move(entries));
}

AtomVector from_edge_vector(int n, int k, const EdgeVector& x) {
  const auto cells = diamond_cells(n, k);
  if (x.dim() != cells) throw DomainError("edge vector does not match the atom grid");
  std::vector<AtomVector::Segment> segs;
  for (const auto& [e, v] : x.entries()) segs.push_back({e, e + std::uint64_t{1}, v * static_cast<long>(cells)});
  return AtomVector(n, k, std::move(segs), cells);
}

}  // namespace tcs
