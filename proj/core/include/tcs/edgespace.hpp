#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tcs/graphs.hpp"
#include "tcs/rational.hpp"

namespace tcs {

struct Norms {
  Rational l1;
  Rational l2sq;
  Rational linf;
};

/// Sparse exact vector over the edge set of a graph with `dim` edges.
/// Entries are kept sorted by edge index, with no explicit zeros.
class EdgeVector {
 public:
  using Entry = std::pair<std::uint32_t, Rational>;

  EdgeVector() = default;
  explicit EdgeVector(std::size_t dim) : dim_(dim) {}
  /// Entries may be unsorted and contain duplicates or zeros; they are merged.
  EdgeVector(std::size_t dim, std::vector<Entry> entries);

  static EdgeVector unit(std::size_t dim, std::size_t edge, const Rational& value = 1);
  static EdgeVector from_dense(std::span<const Rational> values);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }

  Rational operator[](std::size_t edge) const;
  std::vector<Rational> to_dense() const;

  /// Entries with first_edge <= index < end_edge, as an iterator range.
  std::pair<std::vector<Entry>::const_iterator, std::vector<Entry>::const_iterator> range(std::size_t begin,
                                                                                        std::size_t end) const;
  EdgeVector restricted(std::size_t begin, std::size_t end) const;

  Rational l1() const;
  Rational l2sq() const;
  Rational linf() const;
  Norms norms() const { return {l1(), l2sq(), linf()}; }

  EdgeVector& operator+=(const EdgeVector& other);
  EdgeVector& operator-=(const EdgeVector& other);
  EdgeVector& operator*=(const Rational& factor);
  friend EdgeVector operator+(EdgeVector a, const EdgeVector& b) { return a += b; }
  friend EdgeVector operator-(EdgeVector a, const EdgeVector& b) { return a -= b; }
  friend EdgeVector operator*(const Rational& c, EdgeVector a) { return a *= c; }
  friend EdgeVector operator-(EdgeVector a) { return a *= Rational(-1); }
  friend bool operator==(const EdgeVector&, const EdgeVector&) = default;

  /// this += factor * other
  void axpy(const Rational& factor, const EdgeVector& other);

 private:
  void combine(const EdgeVector& other, const Rational& factor);

  std::size_t dim_ = 0;
  std::vector<Entry> entries_;
};

Rational inner(const EdgeVector& x, const EdgeVector& y);
inline Norms norms(const EdgeVector& x) { return x.norms(); }

/// Dense accumulator used to sum many sparse vectors of the same dimension
/// without repeated merging.
class EdgeAccumulator {
 public:
  explicit EdgeAccumulator(std::size_t dim) : values_(dim), touched_flag_(dim, 0) {}
  void add(std::size_t edge, const Rational& value);
  void axpy(const Rational& factor, const EdgeVector& x);
  /// Collects the nonzero entries and resets the accumulator.
  EdgeVector take();

 private:
  std::vector<Rational> values_;
  std::vector<std::uint8_t> touched_flag_;
  std::vector<std::uint32_t> touched_;
};

/// Replacement weights used by the propagation map, in A..F order.
const std::vector<Rational>& propagation_weights();

/// Lifts a vector from L_m to L_{m+1}: coefficient c on an edge becomes
/// (c, c/2, c/2, c/2, c/2, c) on its six children.
EdgeVector propagate(const EdgeVector& x, std::size_t max_edges = kDefaultMaxEdges);
/// Applies propagate `times` times.
EdgeVector propagate(const EdgeVector& x, int times, std::size_t max_edges);

/// A step of a walk: the edge used and whether it was traversed along its
/// reference orientation (tail to head).
struct WalkStep {
  std::uint32_t edge;
  bool forward;
};

/// Signed indicator of a closed walk given as a vertex sequence v0, v1, ..., v0.
/// Throws DomainError if consecutive vertices are not adjacent or the walk
/// does not return to its start.
EdgeVector cycle_indicator(const RecursiveGraph& g, const std::vector<std::uint32_t>& vertices);
/// Same, from explicit edge steps.
EdgeVector cycle_indicator(const RecursiveGraph& g, const std::vector<WalkStep>& steps);

}  // namespace tcs
