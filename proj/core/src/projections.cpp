#include "tcs/projections.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_set>

#include "tcs/errors.hpp"
#include "tcs/parallel.hpp"

namespace tcs {

namespace {

bool in_bcde(std::uint8_t d) { return d >= 1 && d <= 4; }

std::vector<SubAddress> copies_at(int n, int j) {
  std::vector<SubAddress> out;
  const int len = n - j;
  std::size_t count = 1;
  for (int i = 0; i < len; ++i) count *= 6;
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

}  // namespace

// ---------------------------------------------------------------- EdgeOperator

EdgeOperator::EdgeOperator(std::shared_ptr<const OrthogonalBasis> basis, std::vector<EdgeVector> images)
    : basis_(std::move(basis)), images_(std::move(images)) {
  if (!basis_) throw DomainError("operator needs a basis");
  if (images_.size() != basis_->size()) throw DomainError("one image per basis element required");
  for (const auto& v : images_)
    if (v.dim() != basis_->dim()) throw DomainError("image has wrong dimension");
}

EdgeOperator EdgeOperator::identity(std::shared_ptr<const OrthogonalBasis> basis) {
  std::vector<EdgeVector> images;
  images.reserve(basis->size());
  for (const auto& b : basis->elements()) images.push_back(b.vector);
  return {std::move(basis), std::move(images)};
}

EdgeOperator EdgeOperator::from_dense(std::shared_ptr<const OrthogonalBasis> basis, const RationalMatrix& m) {
  const std::size_t dim = basis->dim();
  if (m.rows() != dim || m.cols() != dim) throw DomainError("matrix has wrong shape");
  std::vector<EdgeVector> images;
  images.reserve(basis->size());
  std::vector<Rational> col(dim);
  for (const auto& b : basis->elements()) {
    std::fill(col.begin(), col.end(), Rational(0));
    for (const auto& [e, v] : b.vector.entries())
      for (std::size_t r = 0; r < dim; ++r)
        if (m(r, e) != 0) col[r] += v * m(r, e);
    images.push_back(EdgeVector::from_dense(col));
  }
  return {std::move(basis), std::move(images)};
}

EdgeVector EdgeOperator::apply(const EdgeVector& x) const {
  EdgeAccumulator acc(dim());
  for (const auto& [i, c] : basis_->coefficients(x)) acc.axpy(c, images_[i]);
  return acc.take();
}

EdgeVector EdgeOperator::column(std::size_t edge) const { return apply(EdgeVector::unit(dim(), edge)); }

RationalMatrix EdgeOperator::to_dense() const {
  RationalMatrix m(dim(), dim());
  for (std::size_t c = 0; c < dim(); ++c) {
    const auto col = column(c);
    for (const auto& [r, v] : col.entries()) m(r, c) = v;
  }
  return m;
}

EdgeOperator EdgeOperator::compose(const EdgeOperator& other) const {
  if (other.basis_ != basis_ && other.dim() != dim()) throw DomainError("operators act on different spaces");
  std::vector<EdgeVector> images;
  images.reserve(images_.size());
  for (const auto& v : other.images_) images.push_back(apply(v));
  return {basis_, std::move(images)};
}

std::vector<Rational> column_l1_norms(const EdgeOperator& op) {
  std::vector<Rational> out(op.dim());
  parallel_for(op.dim(), [&](std::size_t e) { out[e] = op.column(e).l1(); });
  return out;
}

OperatorNorm operator_l1_norm(const EdgeOperator& op) {
  auto cols = column_l1_norms(op);
  OperatorNorm best{cols.empty() ? Rational(0) : cols[0], 0};
  for (std::size_t e = 1; e < cols.size(); ++e)
    if (cols[e] > best.norm) best = {cols[e], e};
  return best;
}

EdgeOperator orthogonal_projection(std::shared_ptr<const OrthogonalBasis> basis) {
  std::vector<EdgeVector> images;
  images.reserve(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i)
    images.push_back(i < basis->cycle_count() ? (*basis)[i].vector : EdgeVector(basis->dim()));
  return {std::move(basis), std::move(images)};
}

EdgeOperator orthogonal_projection(int n, std::size_t max_edges) {
  return orthogonal_projection(std::make_shared<const OrthogonalBasis>(n, max_edges));
}

ProjectionCheck check_projection_onto_cycles(const EdgeOperator& op) {
  ProjectionCheck out;
  const auto& B = op.basis();
  out.fixes_cycles = true;
  for (std::size_t i = 0; i < B.cycle_count(); ++i) {
    if (op.image(i) != B[i].vector) {
      out.fixes_cycles = false;
      out.detail = "does not fix " + B[i].label();
      break;
    }
  }
  std::vector<char> in_z(B.size(), 1), idem(B.size(), 1);
  parallel_for(B.size(), [&](std::size_t i) {
    for (const auto& [k, c] : B.coefficients(op.image(i)))
      if (k >= B.cycle_count()) {
        in_z[i] = 0;
        break;
      }
    idem[i] = op.apply(op.image(i)) == op.image(i);
  });
  out.lands_in_cycle_space = std::all_of(in_z.begin(), in_z.end(), [](char c) { return c != 0; });
  out.idempotent = std::all_of(idem.begin(), idem.end(), [](char c) { return c != 0; });
  if (out.detail.empty()) {
    for (std::size_t i = 0; i < B.size(); ++i) {
      if (!in_z[i]) {
        out.detail = "image of " + B[i].label() + " leaves Z";
        break;
      }
      if (!idem[i]) {
        out.detail = "P(P(" + B[i].label() + ")) != P(" + B[i].label() + ")";
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- P_n

EdgeVector materialize_chain_vector(const OrthogonalBasis& basis, const ChainRecord& rec,
                                    const std::vector<Rational>& coords) {
  EdgeAccumulator acc(basis.dim());
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) acc.axpy(coords[i], basis[basis.h_index(rec.copies[i])].vector);
  return acc.take();
}

namespace {

class PnBuilder {
 public:
  PnBuilder(std::shared_ptr<const OrthogonalBasis> basis) : bp_(std::move(basis)), B_(*bp_) {
    images_.assign(B_.size(), EdgeVector(B_.dim()));
    assigned_.assign(B_.size(), 0);
    for (std::size_t i = 0; i < B_.cycle_count(); ++i) images_[i] = B_[i].vector;
    trace_.n = B_.level();
  }

  BuiltProjection run(bool verify) {
    const int n = B_.level();
    std::vector<SubAddress> tops;
    for (int m = n; m >= 1; --m) {
      const int len = n - m;
      for (std::size_t mask = 0; mask < (std::size_t{1} << len); ++mask) {
        std::vector<std::uint8_t> d(len);
        for (int i = 0; i < len; ++i) d[i] = (mask >> (len - 1 - i)) & 1 ? 5 : 0;
        tops.emplace_back(6, n, d);
      }
    }
    for (const auto& t : tops) run_top(t);
    if (verify) replay_chains();
    return {EdgeOperator(bp_, std::move(images_)), std::move(trace_)};
  }

 private:
  const EdgeVector& H(const SubAddress& s) const { return B_[B_.h_index(s)].vector; }
  int h_sign_on(const SubAddress& s, const SubAddress& child) const { return sgn(H(s)[child.first_edge()]); }

  void run_top(const SubAddress& top) {
    const int m = top.level();
    TopTrace tt{top, m, {}, {}, {}};
    tt.r.resize(m);
    SubAddress probe = top;
    for (int j = m; j >= 1; --j) {
      const auto& h = H(probe);
      tt.r[j - 1] = h.l1() / h.l2sq();
      if (j > 1) probe = probe.child(1);
    }
    tt.x.assign(m, 0);
    tt.a.assign(std::max(m - 1, 0), 0);
    tt.x[m - 1] = tt.r[m - 1];
    for (int j = m - 1; j >= 1; --j) {
      const Rational& xn = tt.x[j];
      tt.a[j - 1] = (xn / 2 - tt.r[j - 1]) / (2 * xn);
      tt.x[j - 1] = (1 - tt.a[j - 1]) * xn;
    }
    const std::size_t t = trace_.tops.size();
    trace_.tops.push_back(tt);

    ChainRecord rec;
    rec.top = t;
    rec.copies.assign(m, top);
    rec.eps.assign(m, -1);
    rec.X.assign(m, {});
    if (m == 1) {
      finish_leaf(rec, top, m);
      return;
    }
    for (std::uint8_t d = 1; d <= 4; ++d) {
      auto s = top.child(d);
      std::vector<Rational> xm(m, 0);
      xm[m - 1] = Rational(h_sign_on(top, s)) / B_.norm2(B_.h_index(top));
      rec.X[m - 1] = xm;
      rec.copies[m - 2] = s;
      visit(rec, m - 1);
    }
  }

  // rec.copies[j-1] = S_j and rec.X[j] = X_{j+1} are set.
  void visit(ChainRecord& rec, int j) {
    const auto& tt = trace_.tops[rec.top];
    const SubAddress s = rec.copies[j - 1];
    const std::size_t gi = B_.g_index(s);
    const auto& Xn = rec.X[j];
    EdgeVector img = materialize_chain_vector(B_, rec, Xn);
    img *= B_.norm2(gi) * tt.a[j - 1];
    if (assigned_[gi]) throw VerificationError("image of " + B_[gi].label() + " assigned twice");
    images_[gi] = std::move(img);
    assigned_[gi] = 1;
    if (j == 1) {
      finish_leaf(rec, s, tt.m);
      return;
    }
    const std::size_t hi = B_.h_index(s);
    for (std::uint8_t d = 0; d < 6; ++d) {
      auto child = s.child(d);
      std::vector<Rational> xj = next_X(Xn, tt.a[j - 1], in_bcde(d), j, h_sign_on(s, child), B_.norm2(hi));
      rec.X[j - 1] = std::move(xj);
      rec.eps[j - 1] = in_bcde(d) ? 1 : 0;
      rec.copies[j - 2] = child;
      visit(rec, j - 1);
    }
  }

  static std::vector<Rational> next_X(const std::vector<Rational>& xn, const Rational& a, bool inside, int j, int s,
                                      const Rational& h_norm2) {
    std::vector<Rational> out(xn.size());
    const Rational f = inside ? Rational(Rational(1, 2) + a) : Rational(1 - a);
    for (std::size_t i = 0; i < xn.size(); ++i) out[i] = f * xn[i];
    if (inside) out[j - 1] += Rational(s) / h_norm2;
    return out;
  }

  void finish_leaf(ChainRecord rec, const SubAddress& s1, int m) {
    const auto& tt = trace_.tops[rec.top];
    const std::size_t hi = B_.h_index(s1);
    for (std::uint8_t d = 0; d < 6; ++d) {
      const bool inside = in_bcde(d);
      int s = inside ? h_sign_on(s1, s1.child(d)) : 0;
      if (m == 1) {
        std::vector<Rational> x1(1, 0);
        if (inside) x1[0] = Rational(s) / B_.norm2(hi);
        rec.X1[d] = x1;
      } else {
        rec.X1[d] = next_X(rec.X[1], tt.a[0], inside, 1, s, B_.norm2(hi));
      }
      rec.eps1[d] = inside ? 1 : 0;
      std::vector<int> alpha(m, 0);
      int count = 0;
      for (int j = 1; j <= m; ++j) {
        alpha[j - 1] = count;
        int eps_j = j == 1 ? rec.eps1[d] : (j <= m - 1 ? rec.eps[j - 1] : 0);
        count += eps_j;
      }
      rec.alpha[d] = alpha;
    }
    trace_.chains.push_back(std::move(rec));
  }

  // Walk every chain again from its top, independently of the DFS order, and
  // check each G_j image only depends on S_j.
  void replay_chains() {
    for (const auto& rec : trace_.chains) {
      const auto& tt = trace_.tops[rec.top];
      const int m = tt.m;
      if (m == 1) continue;
      std::vector<Rational> X(m, 0);
      X[m - 1] = Rational(h_sign_on(tt.top, rec.copies[m - 2])) / B_.norm2(B_.h_index(tt.top));
      for (int j = m - 1; j >= 1; --j) {
        const auto& s = rec.copies[j - 1];
        const std::size_t gi = B_.g_index(s);
        EdgeVector expect = materialize_chain_vector(B_, rec, X);
        expect *= B_.norm2(gi) * tt.a[j - 1];
        if (expect != images_[gi])
          throw VerificationError("P_n(" + B_[gi].label() + ") is not well defined along chain through " +
                                  rec.copies[0].to_string());
        if (j > 1) {
          const auto& child = rec.copies[j - 2];
          const std::uint8_t d = child.digits().back();
          X = next_X(X, tt.a[j - 1], in_bcde(d), j, h_sign_on(s, child), B_.norm2(B_.h_index(s)));
        }
      }
      ++trace_.chains_checked;
    }
  }

  std::shared_ptr<const OrthogonalBasis> bp_;
  const OrthogonalBasis& B_;
  std::vector<EdgeVector> images_;
  std::vector<char> assigned_;
  ProjectionTrace trace_;
};

}  // namespace

BuiltProjection build_Pn(std::shared_ptr<const OrthogonalBasis> basis, bool verify_chains) {
  if (basis->level() < 1) throw DomainError("P_n needs n >= 1");
  PnBuilder b(std::move(basis));
  return b.run(verify_chains);
}

BuiltProjection build_Pn(int n, bool verify_chains, std::size_t max_edges) {
  return build_Pn(std::make_shared<const OrthogonalBasis>(n, max_edges), verify_chains);
}

// ---------------------------------------------------------------- isometries

SignedPermutation::SignedPermutation(std::vector<std::uint32_t> perm, std::vector<std::int8_t> sign)
    : perm_(std::move(perm)), sign_(std::move(sign)) {
  if (perm_.size() != sign_.size()) throw DomainError("permutation and signs differ in length");
  std::vector<char> seen(perm_.size(), 0);
  for (auto p : perm_) {
    if (p >= perm_.size() || seen[p]) throw DomainError("not a permutation");
    seen[p] = 1;
  }
}

SignedPermutation SignedPermutation::identity(std::size_t dim) {
  std::vector<std::uint32_t> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = static_cast<std::uint32_t>(i);
  return {std::move(p), std::vector<std::int8_t>(dim, 1)};
}

bool SignedPermutation::is_identity() const {
  for (std::size_t i = 0; i < perm_.size(); ++i)
    if (perm_[i] != i || sign_[i] != 1) return false;
  return true;
}

EdgeVector SignedPermutation::apply(const EdgeVector& x) const {
  if (x.dim() != dim()) throw DomainError("dimension mismatch");
  std::vector<EdgeVector::Entry> out;
  out.reserve(x.nnz());
  for (const auto& [i, v] : x.entries()) out.emplace_back(perm_[i], sign_[i] < 0 ? Rational(-v) : v);
  return EdgeVector(dim(), std::move(out));
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& other) const {
  // (this o other) e_i = this(s_i e_{p_i}) = s_i t_{p_i} e_{q_{p_i}}
  std::vector<std::uint32_t> p(dim());
  std::vector<std::int8_t> s(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto mid = other.perm_[i];
    p[i] = perm_[mid];
    s[i] = static_cast<std::int8_t>(other.sign_[i] * sign_[mid]);
  }
  return {std::move(p), std::move(s)};
}

SignedPermutation SignedPermutation::inverse() const {
  std::vector<std::uint32_t> p(dim());
  std::vector<std::int8_t> s(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    p[perm_[i]] = static_cast<std::uint32_t>(i);
    s[perm_[i]] = sign_[i];
  }
  return {std::move(p), std::move(s)};
}

std::size_t SignedPermutationHash::operator()(const SignedPermutation& p) const {
  std::size_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    h ^= (static_cast<std::size_t>(p.perm()[i]) << 1) ^ static_cast<std::size_t>(p.sign()[i] < 0);
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_string(SwapKind kind) {
  switch (kind) {
    case SwapKind::af: return "A<->F";
    case SwapKind::bc: return "B<->C";
    case SwapKind::de: return "D<->E";
    case SwapKind::be_cd: return "B<->E,C<->D";
  }
  return "?";
}

std::array<std::uint8_t, 6> IsometryGenerator::digit_map() const {
  std::array<std::uint8_t, 6> m{0, 1, 2, 3, 4, 5};
  switch (kind) {
    case SwapKind::af: std::swap(m[0], m[5]); break;
    case SwapKind::bc: std::swap(m[1], m[2]); break;
    case SwapKind::de: std::swap(m[3], m[4]); break;
    case SwapKind::be_cd:
      std::swap(m[1], m[4]);
      std::swap(m[2], m[3]);
      break;
  }
  return m;
}

std::uint32_t IsometryGenerator::image(std::uint32_t edge) const {
  const std::size_t first = support.first_edge();
  const std::size_t count = support.edge_count();
  if (edge < first || edge >= first + count) return edge;
  const std::size_t block = count / 6;
  const std::size_t off = edge - first;
  const auto map = digit_map();
  return static_cast<std::uint32_t>(first + map[off / block] * block + off % block);
}

EdgeVector IsometryGenerator::apply(const EdgeVector& x) const {
  std::vector<EdgeVector::Entry> out;
  out.reserve(x.nnz());
  for (const auto& [i, v] : x.entries()) out.emplace_back(image(i), v);
  return EdgeVector(x.dim(), std::move(out));
}

SignedPermutation IsometryGenerator::permutation(std::size_t dim) const {
  std::vector<std::uint32_t> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = image(static_cast<std::uint32_t>(i));
  return {std::move(p), std::vector<std::int8_t>(dim, 1)};
}

std::vector<IsometryGenerator> isometry_generators(const OrthogonalBasis& basis) {
  std::vector<IsometryGenerator> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& b = basis[i];
    if (b.is_cycle()) {
      out.push_back({b.support, SwapKind::be_cd, i});
    } else if (b.is_nonspecial()) {
      SwapKind k = b.row == 2 ? SwapKind::af : b.row == 3 ? SwapKind::bc : SwapKind::de;
      out.push_back({b.support, k, i});
    }
  }
  return out;
}

BasisImage basis_image(const OrthogonalBasis& basis, const IsometryGenerator& gen, std::size_t element) {
  const auto& b = basis[element];
  EdgeVector v = gen.apply(b.vector);
  std::vector<std::size_t> candidates;
  if (b.cls == BasisClass::cut_f) {
    candidates.push_back(basis.f_index());
  } else {
    SubAddress q = b.support;
    const auto& p = gen.support;
    if (p.contains(q) && q.level() < p.level()) {
      auto d = q.digits();
      const auto map = gen.digit_map();
      d[p.digits().size()] = map[d[p.digits().size()]];
      q = SubAddress(6, q.graph_level(), d);
    }
    candidates.push_back(basis.h_index(q));
    candidates.push_back(basis.g_index(q));
    for (int r = 2; r <= 4; ++r) candidates.push_back(basis.nonspecial_index(q, r));
  }
  for (auto c : candidates) {
    if (v == basis[c].vector) return {c, 1};
    if (v == -basis[c].vector) return {c, -1};
  }
  throw VerificationError(to_string(gen.kind) + " at '" + gen.support.to_string() + "' does not map " + b.label() +
                          " to a basis vector");
}

namespace {

// y(theta e) == y(e) for every e in the moved range
bool symmetric_on_support(const EdgeVector& y, const IsometryGenerator& gen) {
  auto [lo, hi] = y.range(gen.support.first_edge(), gen.support.end_edge());
  for (auto it = lo; it != hi; ++it)
    if (y[gen.image(it->first)] != it->second) return false;
  return true;
}

}  // namespace

CommutationReport check_commutation(const EdgeOperator& op, const std::vector<IsometryGenerator>& gens) {
  const auto& B = op.basis();
  CommutationReport rep;
  rep.generators = gens.size();
  std::vector<std::size_t> pairs(gens.size(), 0), fails(gens.size(), 0);
  std::vector<std::string> first(gens.size());
  parallel_for(gens.size(), [&](std::size_t g) {
    const auto& gen = gens[g];
    auto fail = [&](const std::string& what) {
      if (fails[g]++ == 0) first[g] = to_string(gen.kind) + " at '" + gen.support.to_string() + "': " + what;
    };
    for (std::size_t i = 0; i < B.size(); ++i) {
      const auto& b = B[i];
      ++pairs[g];
      const bool f = b.cls == BasisClass::cut_f;
      const bool above = f || (b.support.contains(gen.support) && b.support.level() > gen.support.level());
      const bool inside = !f && gen.support.contains(b.support);
      if (inside) {
        auto bi = basis_image(B, gen, i);
        const auto& y = op.image(i);
        const auto& z = op.image(bi.index);
        bool ok = y.nnz() == z.nnz();
        for (auto it = y.entries().begin(); ok && it != y.entries().end(); ++it) {
          Rational want = bi.sign < 0 ? Rational(-it->second) : it->second;
          ok = z[gen.image(it->first)] == want;
        }
        if (!ok) fail("theta P(" + b.label() + ") != P(theta " + b.label() + ")");
        continue;
      }
      if (above && !symmetric_on_support(b.vector, gen)) {
        fail("does not fix " + b.label());
        continue;
      }
      if (!symmetric_on_support(op.image(i), gen)) fail("theta P(" + b.label() + ") != P(" + b.label() + ")");
    }
  });
  for (std::size_t g = 0; g < gens.size(); ++g) {
    rep.pairs_checked += pairs[g];
    if (fails[g] && rep.failures == 0) rep.first_failure = first[g];
    rep.failures += fails[g];
  }
  return rep;
}

std::vector<SignedPermutation> group_closure(const std::vector<SignedPermutation>& gens, std::size_t cap) {
  if (gens.empty()) throw DomainError("no generators");
  const std::size_t dim = gens[0].dim();
  std::unordered_set<SignedPermutation, SignedPermutationHash> seen;
  std::vector<SignedPermutation> out;
  std::deque<std::size_t> queue;
  auto id = SignedPermutation::identity(dim);
  seen.insert(id);
  out.push_back(id);
  queue.push_back(0);
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      auto next = g.compose(out[cur]);
      if (seen.insert(next).second) {
        out.push_back(std::move(next));
        if (out.size() > cap)
          throw CapacityError("group closure exceeded cap " + std::to_string(cap) + " (reached " +
                              std::to_string(out.size()) + " elements)");
        queue.push_back(out.size() - 1);
      }
    }
  }
  return out;
}

EdgeOperator invariant_average(const EdgeOperator& q, std::size_t cap) {
  const auto& B = q.basis();
  std::vector<SignedPermutation> gens;
  for (const auto& g : isometry_generators(B)) gens.push_back(g.permutation(B.dim()));
  auto group = group_closure(gens, cap);
  const auto m = q.to_dense();
  const std::size_t dim = B.dim();
  RationalMatrix p(dim, dim);
  for (const auto& t : group) {
    const auto& pi = t.perm();
    const auto& s = t.sign();
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        const auto& v = m(pi[r], pi[c]);
        if (v == 0) continue;
        if (s[r] * s[c] > 0) {
          p(r, c) += v;
        } else {
          p(r, c) -= v;
        }
      }
  }
  const Rational inv(1, static_cast<long>(group.size()));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) p(r, c) *= inv;
  return EdgeOperator::from_dense(q.basis_ptr(), p);
}

EdgeOperator structured_invariant_average(const EdgeOperator& q, std::size_t max_dim) {
  const auto& B = q.basis();
  const std::size_t dim = B.dim();
  if (dim > max_dim)
    throw CapacityError("structured averaging is dense; " + std::to_string(dim) + " edges exceed cap " +
                        std::to_string(max_dim));
  // local group on child digits, generated by the four block swaps
  std::vector<std::array<std::uint8_t, 6>> local{{0, 1, 2, 3, 4, 5}};
  {
    std::vector<std::array<std::uint8_t, 6>> gens;
    for (auto k : {SwapKind::af, SwapKind::bc, SwapKind::de, SwapKind::be_cd})
      gens.push_back(IsometryGenerator{SubAddress::root(6, B.level()), k, 0}.digit_map());
    for (std::size_t i = 0; i < local.size(); ++i)
      for (const auto& g : gens) {
        std::array<std::uint8_t, 6> c;
        for (int d = 0; d < 6; ++d) c[d] = g[local[i][d]];
        if (std::find(local.begin(), local.end(), c) == local.end()) local.push_back(c);
      }
  }
  const Rational inv(1, static_cast<long>(local.size()));
  auto m = q.to_dense();
  for (int j = 1; j <= B.level(); ++j) {
    for (const auto& copy : copies_at(B.level(), j)) {
      const std::size_t first = copy.first_edge(), count = copy.edge_count(), block = count / 6;
      std::vector<std::vector<std::uint32_t>> perms;
      for (const auto& t : local) {
        std::vector<std::uint32_t> p(dim);
        for (std::size_t e = 0; e < dim; ++e) {
          if (e < first || e >= first + count) {
            p[e] = static_cast<std::uint32_t>(e);
          } else {
            const std::size_t off = e - first;
            p[e] = static_cast<std::uint32_t>(first + t[off / block] * block + off % block);
          }
        }
        perms.push_back(std::move(p));
      }
      RationalMatrix next = m;
      auto avg = [&](std::size_t r, std::size_t c) {
        Rational s = 0;
        for (const auto& p : perms) s += m(p[r], p[c]);
        next(r, c) = s * inv;
      };
      for (std::size_t r = 0; r < dim; ++r) {
        const bool row_in = r >= first && r < first + count;
        if (row_in) {
          for (std::size_t c = 0; c < dim; ++c) avg(r, c);
        } else {
          for (std::size_t c = first; c < first + count; ++c) avg(r, c);
        }
      }
      m = std::move(next);
    }
  }
  return EdgeOperator::from_dense(q.basis_ptr(), m);
}

// ---------------------------------------------------------------- chain norm, lower bound

Rational chain_norm(const OrthogonalBasis& basis, const Chain& chain, const std::vector<Rational>& coeffs) {
  if (coeffs.size() > chain.h.size()) throw DomainError("more coefficients than chain vectors");
  Rational s = 0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) s += abs(coeffs[j]) * basis[chain.h[j]].vector.l1();
  return s;
}

Rational restricted_l1(const OrthogonalBasis& basis, const Chain& chain, int j) {
  if (j < 2 || j > static_cast<int>(chain.h.size())) throw DomainError("restriction needs 2 <= j <= n");
  const auto& hj = basis[chain.h[j - 1]].vector;
  Rational total = 0;
  for (const auto& [e, v] : basis[chain.h[j - 2]].vector.entries()) total += abs(hj[e]);
  return total;
}

LowerBoundCertificate lower_bound_certificate(const EdgeOperator& p) {
  const auto& B = p.basis();
  const int n = B.level();
  for (std::size_t i = B.cycle_count(); i < B.size(); ++i) {
    const auto& b = B[i];
    if ((b.is_nonspecial() || b.cls == BasisClass::cut_f) && !p.image(i).is_zero())
      throw InvarianceError("P(" + b.label() + ") != 0");
  }
  LowerBoundCertificate cert;
  std::vector<SubAddress> copies(n, SubAddress::root(6, n));
  std::vector<Rational> X(n, 0), xs(n, 0);
  auto cnorm = [&](const std::vector<Rational>& c) {
    Rational s = 0;
    for (int i = 0; i < n; ++i) s += abs(c[i]) * B[B.h_index(copies[i])].vector.l1();
    return s;
  };
  X[n - 1] = 1 / B.norm2(B.h_index(copies[n - 1]));
  xs[n - 1] = cnorm(X);
  SubAddress cur = copies[n - 1].child(1);
  for (int j = n - 1; j >= 1; --j) {
    copies[j - 1] = cur;
    const std::size_t gi = B.g_index(cur);
    EdgeVector pg = p.image(gi);
    pg *= 1 / B.norm2(gi);
    std::vector<Rational> c(n, 0);
    EdgeVector rest = pg;
    for (int i = j + 1; i <= n; ++i) {
      const std::size_t hi = B.h_index(copies[i - 1]);
      c[i - 1] = inner(pg, B[hi].vector) / B.norm2(hi);
      rest.axpy(-c[i - 1], B[hi].vector);
    }
    if (!rest.is_zero()) throw InvarianceError("P(" + B[gi].label() + ") leaves the span of its ancestors");
    std::vector<Rational> y1(n), y2(n);
    for (int i = 0; i < n; ++i) {
      y1[i] = X[i] - c[i];
      y2[i] = X[i] / 2 + c[i];
    }
    y2[j - 1] += 1 / B.norm2(B.h_index(cur));
    const Rational n1 = cnorm(y1), n2 = cnorm(y2);
    if (n2 >= n1) {
      X = y2;
      xs[j - 1] = n2;
      cur = cur.child(1);
    } else {
      X = y1;
      xs[j - 1] = n1;
      cur = cur.child(0);
    }
  }
  if (n == 1) copies[0] = SubAddress::root(6, 1);
  cert.edge = cur.first_edge();
  cert.copies = copies;
  cert.x = xs;
  EdgeAccumulator acc(B.dim());
  for (int i = 0; i < n; ++i) acc.axpy(X[i], B[B.h_index(copies[i])].vector);
  EdgeVector x1 = acc.take();
  EdgeVector image = p.column(cert.edge);
  cert.image_matches = image == x1;
  cert.image_norm = image.l1();
  cert.x1 = xs[0];
  cert.bound = Rational(3, 4) * cert.x1;
  return cert;
}

LemmaReport check_edge_images(const BuiltProjection& built) {
  const auto& op = built.op;
  const auto& B = op.basis();
  LemmaReport rep;
  std::vector<char> seen(B.dim(), 0);
  std::mutex mu;
  parallel_for(built.trace.chains.size(), [&](std::size_t c) {
    const auto& rec = built.trace.chains[c];
    const auto& s1 = rec.copies[0];
    const std::size_t block = s1.edge_count() / 6;
    for (std::uint8_t d = 0; d < 6; ++d) {
      // level-1 copies have one edge per child
      const std::size_t e = s1.first_edge() + d * block;
      EdgeVector want = materialize_chain_vector(B, rec, rec.X1[d]);
      const bool ok = op.column(e) == want;
      std::lock_guard lock(mu);
      seen[e] = 1;
      ++rep.checked;
      if (!ok && rep.failures++ == 0) rep.first_failure = "P(e_" + std::to_string(e) + ") != X_1";
    }
  });
  for (std::size_t e = 0; e < B.dim(); ++e)
    if (!seen[e]) {
      ++rep.failures;
      if (rep.first_failure.empty()) rep.first_failure = "edge " + std::to_string(e) + " not on a recorded chain";
      break;
    }
  return rep;
}

}  // namespace tcs
