#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tcs/edgespace.hpp"
#include "tcs/linalg.hpp"
#include "tcs/spaces.hpp"

namespace tcs {

/// Linear map on E_n stored through the images of the orthogonal basis.
class EdgeOperator {
 public:
  EdgeOperator(std::shared_ptr<const OrthogonalBasis> basis, std::vector<EdgeVector> images);

  static EdgeOperator identity(std::shared_ptr<const OrthogonalBasis> basis);
  /// Column c of `m` is the image of the unit vector e_c.
  static EdgeOperator from_dense(std::shared_ptr<const OrthogonalBasis> basis, const RationalMatrix& m);

  const OrthogonalBasis& basis() const { return *basis_; }
  const std::shared_ptr<const OrthogonalBasis>& basis_ptr() const { return basis_; }
  std::size_t dim() const { return basis_->dim(); }
  const EdgeVector& image(std::size_t basis_index) const { return images_[basis_index]; }
  const std::vector<EdgeVector>& images() const { return images_; }

  EdgeVector apply(const EdgeVector& x) const;
  EdgeVector column(std::size_t edge) const;
  RationalMatrix to_dense() const;
  /// (*this) o other
  EdgeOperator compose(const EdgeOperator& other) const;

  friend bool operator==(const EdgeOperator& a, const EdgeOperator& b) { return a.images_ == b.images_; }

 private:
  std::shared_ptr<const OrthogonalBasis> basis_;
  std::vector<EdgeVector> images_;
};

struct OperatorNorm {
  Rational norm;
  std::size_t witness_edge = 0;  // lowest edge attaining the maximum
};

/// max_e |op(e)|_1 over standard edge vectors, scanned in parallel.
OperatorNorm operator_l1_norm(const EdgeOperator& op);
std::vector<Rational> column_l1_norms(const EdgeOperator& op);

/// x -> sum_h <x,h> h / |h|_2^2 over the cycle basis.
EdgeOperator orthogonal_projection(std::shared_ptr<const OrthogonalBasis> basis);
EdgeOperator orthogonal_projection(int n, std::size_t max_edges = kDefaultMaxEdges);

struct ProjectionCheck {
  bool fixes_cycles = false;
  bool lands_in_cycle_space = false;
  bool idempotent = false;
  std::string detail;
  bool ok() const { return fixes_cycles && lands_in_cycle_space && idempotent; }
};

/// Exact check that op is a projection onto Z_n.
ProjectionCheck check_projection_onto_cycles(const EdgeOperator& op);

// ---- the projection P_n ----

/// Recursion data for one "top" copy T of level m: T is the whole graph or a
/// copy reached from it through A and F children only; P_n restricted to T
/// is a copy of P_m.
struct TopTrace {
  SubAddress top;
  int m = 0;
  std::vector<Rational> x;  // x[j-1] = x_j, j = 1..m
  std::vector<Rational> a;  // a[j-1] = a_j, j = 1..m-1
  std::vector<Rational> r;  // r[j-1] = |H_j|_1 / |H_j|_2^2
};

/// One chain S_1 ⊂ ... ⊂ S_{m-1} ⊂ S_m = T inside the B..E part of a top.
/// X vectors are kept in chain coordinates: coords[i-1] multiplies H_{S_i}.
struct ChainRecord {
  std::size_t top = 0;               // index into ProjectionTrace::tops
  std::vector<SubAddress> copies;    // copies[j-1] = S_j, j = 1..m
  std::vector<int> eps;              // eps[j-1] = eps_j for j = 2..m-1 (eps[0] unused, set to -1)
  std::vector<std::vector<Rational>> X;  // X[j-1] = coords of X_j for j = 2..m (X[0] empty)
  /// For each of the 6 edges of S_1: coords of X_1 and the eps_1 / alpha values.
  std::array<std::vector<Rational>, 6> X1;
  std::array<int, 6> eps1{};
  std::array<std::vector<int>, 6> alpha;  // alpha[d][j-1], j = 1..m
};

struct ProjectionTrace {
  int n = 0;
  std::vector<TopTrace> tops;  // tops[0] is the whole graph
  std::vector<ChainRecord> chains;
  std::size_t chains_checked = 0;  // chains replayed in the well-definedness check
};

/// Sum of coords[i-1] * H_{S_i} as an edge vector.
EdgeVector materialize_chain_vector(const OrthogonalBasis& basis, const ChainRecord& rec,
                                    const std::vector<Rational>& coords);

struct BuiltProjection {
  EdgeOperator op;
  ProjectionTrace trace;
};

/// P_n. With `verify_chains`, every chain is replayed independently and each
/// image of a G_j is compared with the value assigned first; a mismatch throws
/// VerificationError.
BuiltProjection build_Pn(int n, bool verify_chains = true, std::size_t max_edges = kDefaultMaxEdges);
BuiltProjection build_Pn(std::shared_ptr<const OrthogonalBasis> basis, bool verify_chains = true);

// ---- isometries ----

/// theta(e_i) = sign[i] * e_{perm[i]}
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<std::uint32_t> perm, std::vector<std::int8_t> sign);
  static SignedPermutation identity(std::size_t dim);

  std::size_t dim() const { return perm_.size(); }
  const std::vector<std::uint32_t>& perm() const { return perm_; }
  const std::vector<std::int8_t>& sign() const { return sign_; }
  bool is_identity() const;

  EdgeVector apply(const EdgeVector& x) const;
  /// (*this) o other
  SignedPermutation compose(const SignedPermutation& other) const;
  SignedPermutation inverse() const;

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<std::uint32_t> perm_;
  std::vector<std::int8_t> sign_;
};

struct SignedPermutationHash {
  std::size_t operator()(const SignedPermutation& p) const;
};

enum class SwapKind { af, bc, de, be_cd };
std::string to_string(SwapKind kind);

/// psi_g or phi_h: swaps child blocks of one sub-copy, carrying each block onto
/// the other by the identity of L_{j-1} (all signs +1).
struct IsometryGenerator {
  SubAddress support;
  SwapKind kind;
  std::size_t source;  // basis index of the defining g or h

  std::array<std::uint8_t, 6> digit_map() const;
  std::uint32_t image(std::uint32_t edge) const;
  EdgeVector apply(const EdgeVector& x) const;
  SignedPermutation permutation(std::size_t dim) const;
};

/// psi_g for every non-special g (row 2: A<->F, row 3: B<->C, row 4: D<->E)
/// and phi_h for every cycle vector h (B<->E and C<->D).
std::vector<IsometryGenerator> isometry_generators(const OrthogonalBasis& basis);

/// theta(b) = sign * b' for a basis element b; found by direct comparison.
struct BasisImage {
  std::size_t index;
  int sign;
};
BasisImage basis_image(const OrthogonalBasis& basis, const IsometryGenerator& gen, std::size_t element);

struct CommutationReport {
  std::size_t generators = 0;
  std::size_t pairs_checked = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return failures == 0; }
};

/// theta o op == op o theta on every basis element, for every generator.
CommutationReport check_commutation(const EdgeOperator& op, const std::vector<IsometryGenerator>& gens);

/// All group elements generated by `gens` by breadth-first closure; throws
/// CapacityError once more than `cap` elements are found.
std::vector<SignedPermutation> group_closure(const std::vector<SignedPermutation>& gens, std::size_t cap);

inline constexpr std::size_t kDefaultGroupCap = 1000000;

/// |G|^-1 sum theta^-1 Q theta over the full group, by explicit enumeration.
EdgeOperator invariant_average(const EdgeOperator& q, std::size_t cap = kDefaultGroupCap);

/// Same average computed through the wreath-product structure of G: the
/// 16-element local group of every sub-copy is averaged in turn, from level 1
/// up to the whole graph. Dense; limited to at most `max_dim` edges.
EdgeOperator structured_invariant_average(const EdgeOperator& q, std::size_t max_dim = 216);

// ---- chain norm and the lower bound ----

/// sum_j |a_j| |H_j|_1 for coefficients a_j on the chain's H vectors.
Rational chain_norm(const OrthogonalBasis& basis, const Chain& chain, const std::vector<Rational>& coeffs);
/// H_j restricted to supp(H_{j-1}), l1 norm (j >= 2).
Rational restricted_l1(const OrthogonalBasis& basis, const Chain& chain, int j);

struct LowerBoundCertificate {
  std::size_t edge = 0;
  Rational image_norm;  // |P(e)|_1
  Rational x1;          // chain norm of X_1
  Rational bound;       // (3/4) x1
  std::vector<SubAddress> copies;  // S_1 .. S_n
  std::vector<Rational> x;         // x_j for j = 1..n
  bool image_matches = false;      // P(e) == X_1 exactly
};

/// The adaptive chain construction for an invariant projection onto Z_n.
/// Throws InvarianceError if P does not kill some non-special or f vector,
/// or if P(G_j) leaves the span of the H vectors above it.
LowerBoundCertificate lower_bound_certificate(const EdgeOperator& p);

/// P_n(e) == X_1 for every edge, using the recorded chains.
LemmaReport check_edge_images(const BuiltProjection& built);

}  // namespace tcs
