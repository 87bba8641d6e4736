#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tcs/edgespace.hpp"
#include "tcs/graphs.hpp"

namespace tcs {

enum class BasisClass { cycle_H, cycle_top_h, cut_G, cut_nonspecial, cut_f };

std::string to_string(BasisClass cls);

struct BasisElement {
  EdgeVector vector;
  BasisClass cls;
  SubAddress support;  // smallest sub-copy containing the support (root for f)
  int level;           // level of `support`
  int row;             // generating row of the L_1 cut matrix (1..5); 0 for cycle vectors

  bool is_cycle() const { return cls == BasisClass::cycle_H || cls == BasisClass::cycle_top_h; }
  bool is_cut() const { return !is_cycle(); }
  /// G-type cut vectors, including g_n.
  bool is_special() const { return cls == BasisClass::cut_G; }
  bool is_nonspecial() const { return cls == BasisClass::cut_nonspecial; }
  /// e.g. "H@BC", "G@", "N3@A", "f"
  std::string label() const;
};

/// Rows of the 5 x 6 cut matrix of L_1 (row 1 is g_1, row 5 is f_1) and h_1.
const std::array<std::array<Rational, 6>, 5>& laakso_cut_rows();
const std::array<Rational, 6>& laakso_h1();

/// One cycle vector per sub-L_j, levels n down to 1, address order within a level.
std::vector<BasisElement> cycle_basis(int n, std::size_t max_edges = kDefaultMaxEdges);
/// The propagated f first, then for levels n..1 and each sub-copy: G, rows 2, 3, 4.
std::vector<BasisElement> cut_basis(int n, std::size_t max_edges = kDefaultMaxEdges);

/// The union of both bases over L_n, cycle vectors first, with an edge
/// incidence index for fast coefficient extraction.
class OrthogonalBasis {
 public:
  struct Incidence {
    std::uint32_t element;
    Rational value;
  };

  explicit OrthogonalBasis(int n, std::size_t max_edges = kDefaultMaxEdges);

  int level() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t cycle_count() const { return cycle_count_; }
  const BasisElement& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<BasisElement>& elements() const { return elements_; }
  const Rational& norm2(std::size_t i) const { return norm2_[i]; }
  std::span<const Incidence> incidence(std::size_t edge) const;

  /// Nonzero pairs (i, <x,b_i>/|b_i|^2), sorted by i.
  std::vector<std::pair<std::uint32_t, Rational>> coefficients(const EdgeVector& x) const;

  std::size_t h_index(const SubAddress& copy) const;
  std::size_t g_index(const SubAddress& copy) const;
  std::size_t nonspecial_index(const SubAddress& copy, int row) const;
  std::size_t f_index() const { return cycle_count_; }

 private:
  std::size_t level_offset(int j) const;
  std::size_t copy_index(const SubAddress& copy) const;

  int n_;
  std::size_t dim_;
  std::size_t cycle_count_;
  std::vector<BasisElement> elements_;
  std::vector<Rational> norm2_;
  std::vector<std::size_t> incidence_start_;
  std::vector<Incidence> incidence_;
};

enum class NamedRole { f, g, h };

struct NamedVector {
  NamedRole role;
  int level;
  EdgeVector vector;
};

/// f_n, g_n or h_n built by repeated propagation of f_1, g_1, h_1.
NamedVector named_vector(NamedRole role, int n, std::size_t max_edges = kDefaultMaxEdges);

struct Chain {
  std::vector<SubAddress> copies;  // copies[j-1] = S_j
  std::vector<std::size_t> g;      // g[j-1]: basis index of G_j
  std::vector<std::size_t> h;      // h[j-1]: basis index of H_j
};

/// Basis elements supported exactly on S_1 ⊂ ... ⊂ S_n. Throws DomainError if
/// the list is not a nested chain with S_j of level j.
Chain chain(const OrthogonalBasis& basis, const std::vector<SubAddress>& copies);
/// The unique chain through a given level-1 copy.
Chain chain_through(const OrthogonalBasis& basis, const SubAddress& s1);

struct LemmaReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0 && checked > 0; }
};

/// For every sub-L_j and every edge e in it: <e,H_j> = 0 iff <e,G_j> < 0, and
/// <e,H_j> != 0 implies <e,G_j> = |<e,H_j>| > 0.
LemmaReport check_sign_lemma(const OrthogonalBasis& basis);

/// Over every chain and every e in S_1: <e,G_j> = 2^-alpha_j sgn<e,G_j> and
/// likewise for H_j, where alpha_j counts r < j with S_{r-1} inside supp(H_r).
LemmaReport check_inner_product_lemma(const OrthogonalBasis& basis);

/// alpha_j for an edge e of S_1 along its chain (index j-1), j = 1..n.
std::vector<int> alpha_counts(const OrthogonalBasis& basis, std::size_t edge);

}  // namespace tcs
