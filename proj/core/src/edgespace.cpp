#include "tcs/edgespace.hpp"

#include <algorithm>

#include "tcs/errors.hpp"

namespace tcs {

EdgeVector::EdgeVector(std::size_t dim, std::vector<Entry> entries) : dim_(dim) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (auto& [i, v] : entries) {
    if (i >= dim_) throw DomainError("edge index out of range");
    if (!entries_.empty() && entries_.back().first == i) {
      entries_.back().second += v;
    } else {
      entries_.emplace_back(i, std::move(v));
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0; });
}

EdgeVector EdgeVector::unit(std::size_t dim, std::size_t edge, const Rational& value) {
  if (edge >= dim) throw DomainError("edge index out of range");
  EdgeVector v(dim);
  if (value != 0) v.entries_.emplace_back(static_cast<std::uint32_t>(edge), value);
  return v;
}

EdgeVector EdgeVector::from_dense(std::span<const Rational> values) {
  EdgeVector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0) v.entries_.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  return v;
}

Rational EdgeVector::operator[](std::size_t edge) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), edge,
                             [](const Entry& e, std::size_t i) { return e.first < i; });
  if (it != entries_.end() && it->first == edge) return it->second;
  return 0;
}

std::vector<Rational> EdgeVector::to_dense() const {
  std::vector<Rational> out(dim_);
  for (const auto& [i, v] : entries_) out[i] = v;
  return out;
}

std::pair<std::vector<EdgeVector::Entry>::const_iterator, std::vector<EdgeVector::Entry>::const_iterator>
EdgeVector::range(std::size_t begin, std::size_t end) const {
  auto cmp = [](const Entry& e, std::size_t i) { return e.first < i; };
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), begin, cmp);
  auto hi = std::lower_bound(lo, entries_.end(), end, cmp);
  return {lo, hi};
}

EdgeVector EdgeVector::restricted(std::size_t begin, std::size_t end) const {
  EdgeVector out(dim_);
  auto [lo, hi] = range(begin, end);
  out.entries_.assign(lo, hi);
  return out;
}

Rational EdgeVector::l1() const {
  Rational s = 0;
  for (const auto& e : entries_) s += abs(e.second);
  return s;
}

Rational EdgeVector::l2sq() const {
  Rational s = 0;
  for (const auto& e : entries_) s += e.second * e.second;
  return s;
}

Rational EdgeVector::linf() const {
  Rational s = 0;
  for (const auto& e : entries_) s = std::max(s, Rational(abs(e.second)));
  return s;
}

void EdgeVector::combine(const EdgeVector& other, const Rational& factor) {
  if (other.dim_ != dim_) throw DomainError("dimension mismatch");
  if (other.entries_.empty() || factor == 0) return;
  std::vector<Entry> out;
  out.reserve(entries_.size() + other.entries_.size());
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == entries_.end() || b->first < a->first) {
      out.emplace_back(b->first, factor * b->second);
      ++b;
    } else {
      Rational v = a->second + factor * b->second;
      if (v != 0) out.emplace_back(a->first, std::move(v));
      ++a;
      ++b;
    }
  }
  entries_ = std::move(out);
}

EdgeVector& EdgeVector::operator+=(const EdgeVector& other) {
  combine(other, 1);
  return *this;
}

EdgeVector& EdgeVector::operator-=(const EdgeVector& other) {
  combine(other, -1);
  return *this;
}

EdgeVector& EdgeVector::operator*=(const Rational& factor) {
  if (factor == 0) {
    entries_.clear();
  } else {
    for (auto& e : entries_) e.second *= factor;
  }
  return *this;
}

void EdgeVector::axpy(const Rational& factor, const EdgeVector& other) { combine(other, factor); }

Rational inner(const EdgeVector& x, const EdgeVector& y) {
  if (x.dim() != y.dim()) throw DomainError("dimension mismatch");
  Rational s = 0;
  auto a = x.entries().begin();
  auto b = y.entries().begin();
  while (a != x.entries().end() && b != y.entries().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

void EdgeAccumulator::add(std::size_t edge, const Rational& value) {
  if (!touched_flag_[edge]) {
    touched_flag_[edge] = 1;
    touched_.push_back(static_cast<std::uint32_t>(edge));
  }
  values_[edge] += value;
}

void EdgeAccumulator::axpy(const Rational& factor, const EdgeVector& x) {
  if (factor == 0) return;
  for (const auto& [i, v] : x.entries()) add(i, factor * v);
}

EdgeVector EdgeAccumulator::take() {
  std::sort(touched_.begin(), touched_.end());
  std::vector<EdgeVector::Entry> entries;
  entries.reserve(touched_.size());
  for (auto i : touched_) {
    if (values_[i] != 0) entries.emplace_back(i, values_[i]);
    values_[i] = 0;
    touched_flag_[i] = 0;
  }
  touched_.clear();
  return EdgeVector(values_.size(), std::move(entries));
}

const std::vector<Rational>& propagation_weights() {
  static const std::vector<Rational> w{Rational(1), Rational(1, 2), Rational(1, 2),
                                       Rational(1, 2), Rational(1, 2), Rational(1)};
  return w;
}

EdgeVector propagate(const EdgeVector& x, std::size_t max_edges) {
  if (x.dim() > max_edges / 6) throw CapacityError("propagation would exceed edge cap " + std::to_string(max_edges));
  const auto& w = propagation_weights();
  std::vector<EdgeVector::Entry> out;
  out.reserve(x.nnz() * 6);
  for (const auto& [i, c] : x.entries())
    for (std::uint32_t d = 0; d < 6; ++d) out.emplace_back(6 * i + d, c * w[d]);
  return EdgeVector(x.dim() * 6, std::move(out));
}

EdgeVector propagate(const EdgeVector& x, int times, std::size_t max_edges) {
  EdgeVector v = x;
  for (int i = 0; i < times; ++i) v = propagate(v, max_edges);
  return v;
}

EdgeVector cycle_indicator(const RecursiveGraph& g, const std::vector<std::uint32_t>& vertices) {
  if (vertices.size() < 2) throw DomainError("walk needs at least two vertices");
  if (vertices.front() != vertices.back()) throw DomainError("walk is not closed");
  std::vector<WalkStep> steps;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    auto u = vertices[i], v = vertices[i + 1];
    auto e = g.find_edge(u, v);
    if (!e) throw DomainError("vertices " + std::to_string(u) + " and " + std::to_string(v) + " are not adjacent");
    steps.push_back({*e, g.edge(*e).tail == u});
  }
  return cycle_indicator(g, steps);
}

EdgeVector cycle_indicator(const RecursiveGraph& g, const std::vector<WalkStep>& steps) {
  if (steps.empty()) throw DomainError("empty walk");
  auto start_of = [&](const WalkStep& s) { return s.forward ? g.edge(s.edge).tail : g.edge(s.edge).head; };
  auto end_of = [&](const WalkStep& s) { return s.forward ? g.edge(s.edge).head : g.edge(s.edge).tail; };
  std::vector<EdgeVector::Entry> entries;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].edge >= g.edge_count()) throw DomainError("edge index out of range");
    if (i + 1 < steps.size() && end_of(steps[i]) != start_of(steps[i + 1])) throw DomainError("walk is not connected");
    entries.emplace_back(steps[i].edge, steps[i].forward ? 1 : -1);
  }
  if (end_of(steps.back()) != start_of(steps.front())) throw DomainError("walk is not closed");
  return EdgeVector(g.edge_count(), std::move(entries));
}

}  // namespace tcs
