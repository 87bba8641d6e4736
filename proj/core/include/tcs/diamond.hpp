#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "tcs/edgespace.hpp"
#include "tcs/graphs.hpp"
#include "tcs/rational.hpp"

namespace tcs {

/// Step function on the (2k)^n equal cells of [0,1], stored as sorted,
/// non-overlapping runs of finest cells with a constant nonzero value.
class AtomVector {
 public:
  struct Segment {
    std::uint64_t begin;  // first cell, 0-based
    std::uint64_t end;    // one past the last cell
    Rational value;
    friend bool operator==(const Segment&, const Segment&) = default;
  };

  AtomVector(int n, int k, std::size_t max_cells = kDefaultMaxEdges);
  /// Segments may be unsorted and touch, but not overlap.
  AtomVector(int n, int k, std::vector<Segment> segments, std::size_t max_cells = kDefaultMaxEdges);
  static AtomVector from_dense(int n, int k, const std::vector<Rational>& values);

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t cells() const { return cells_; }
  Rational cell_width() const { return Rational(1, static_cast<long>(cells_)); }
  const std::vector<Segment>& segments() const { return segs_; }
  bool is_zero() const { return segs_.empty(); }

  Rational value_at(std::uint64_t cell) const;
  std::vector<Rational> to_dense() const;

  Rational l1() const;
  Rational linf() const;

  AtomVector& operator+=(const AtomVector& other);
  AtomVector& operator-=(const AtomVector& other);
  AtomVector& operator*=(const Rational& c);
  friend AtomVector operator+(AtomVector a, const AtomVector& b) { return a += b; }
  friend AtomVector operator-(AtomVector a, const AtomVector& b) { return a -= b; }
  friend AtomVector operator*(const Rational& c, AtomVector a) { return a *= c; }
  friend bool operator==(const AtomVector&, const AtomVector&) = default;

 private:
  void normalize();
  void check_same(const AtomVector& other) const;

  int n_;
  int k_;
  std::uint64_t cells_;
  std::vector<Segment> segs_;
};

/// Integral of the product, i.e. sum of values times cell width.
Rational inner(const AtomVector& a, const AtomVector& b);

/// Number of level-i cells, (2k)^i.
std::uint64_t diamond_cells(int i, int k);

/// e_{n,j} = (2k)^n on cell j, j = 1..(2k)^n (returned 0-based).
AtomVector diamond_edge_vector(int n, int k, std::uint64_t j);
std::vector<AtomVector> diamond_edge_vectors(int n, int k, std::size_t max_cells = kDefaultMaxEdges);

struct DiamondElement {
  AtomVector vector;
  int level;            // 0 for h_0
  std::uint64_t index;  // j, 1-based within its level
};

/// h_0 = 1 and h_{i,j} = +1 on level-i cell 2j-1, -1 on cell 2j, 1 <= j <= k(2k)^(i-1).
std::vector<DiamondElement> diamond_cut_basis(int n, int k, std::size_t max_cells = kDefaultMaxEdges);
/// g_{i,j} with j = a(k-1)+b: +1 on level-i cells 2ka+2b-1, 2ka+2b and -1 on
/// the next two; 0 <= a < (2k)^(i-1), 1 <= b <= k-1.
std::vector<DiamondElement> diamond_cycle_system(int n, int k, std::size_t max_cells = kDefaultMaxEdges);

/// Orthogonal projection onto the cut space. Each segment meets at most two
/// h_{i,j} partially per level, so the work is O(segments * n).
AtomVector project_cut(const AtomVector& x);
/// Same, as sum <x,h> h / |h|^2 over an explicit basis.
AtomVector project_cut_naive(const std::vector<DiamondElement>& basis, const AtomVector& x);

/// Closed form (2k-2)n/(2k-1) + (4k^2-6k+3)/(2k-1)^2 + (2k-2)/((2k-1)^2 (2k)^n).
Rational lambda_formula(int n, int k);

struct LambdaReport {
  int n = 0;
  int k = 0;
  Rational computed;  // max_j |P(e_{n,j})|_1
  Rational formula;
  std::uint64_t witness_cell = 0;
  bool columns_equal = false;  // every column has the same l1 norm
  bool match() const { return computed == formula; }
};

/// Exact |P_{n,k}|_1 by a scan over all edge vectors (parallel). Throws
/// VerificationError if it differs from the closed form.
LambdaReport lambda_diamond(int n, int k, std::size_t max_cells = kDefaultMaxEdges);

/// Sorted (|value|, cell count) pairs of P(e_{n,j}).
std::vector<std::pair<Rational, std::uint64_t>> column_distribution(int n, int k, std::uint64_t j);

/// Coefficients on graph edges: cell j carries edge j, and e_{n,j} maps to the unit vector.
EdgeVector to_edge_vector(const RecursiveGraph& g, const AtomVector& x);
AtomVector from_edge_vector(int n, int k, const EdgeVector& x);

}  // namespace tcs
