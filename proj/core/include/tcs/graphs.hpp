#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcs/rational.hpp"

namespace tcs {

inline constexpr std::size_t kDefaultMaxEdges = 100000;

enum class GraphKind { laakso, diamond };

struct Edge {
  std::uint32_t tail;
  std::uint32_t head;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Address of a sub-copy inside a recursive graph of level n: a digit string
/// of length n - j identifying one sub-copy of level j. Digits run over the
/// arity of the replacement gadget (6 for Laakso, labelled A..F; 2k for a
/// diamond of branching k). Edge indices are lexicographic in addresses, so
/// every sub-copy owns a contiguous range of edges.
class SubAddress {
 public:
  SubAddress(int arity, int graph_level, std::vector<std::uint8_t> digits);

  /// The whole graph (empty digit string).
  static SubAddress root(int arity, int graph_level) { return {arity, graph_level, {}}; }

  int arity() const { return arity_; }
  int graph_level() const { return graph_level_; }
  /// Level j of the addressed sub-copy.
  int level() const { return graph_level_ - static_cast<int>(digits_.size()); }
  const std::vector<std::uint8_t>& digits() const { return digits_; }

  std::size_t first_edge() const;
  std::size_t edge_count() const;
  std::size_t end_edge() const { return first_edge() + edge_count(); }
  bool contains_edge(std::size_t edge) const { return edge >= first_edge() && edge < end_edge(); }

  /// True when `other` lies inside this sub-copy (prefix relation).
  bool contains(const SubAddress& other) const;
  SubAddress child(std::uint8_t digit) const;
  SubAddress parent() const;
  /// Digit of the child of this copy that contains `edge`.
  std::uint8_t child_digit_of(std::size_t edge) const;

  /// Laakso: letters "BCA"; diamond: base-2k digits 0-9a-z. Empty for the root.
  std::string to_string() const;

  friend auto operator<=>(const SubAddress&, const SubAddress&) = default;
  friend bool operator==(const SubAddress&, const SubAddress&) = default;

 private:
  int arity_;
  int graph_level_;
  std::vector<std::uint8_t> digits_;
};

/// A Laakso graph L_n or a diamond D_{n,k}. Built once, immutable afterwards.
/// Every edge is oriented from the bottom towards the top.
class RecursiveGraph {
 public:
  GraphKind kind() const { return kind_; }
  int level() const { return level_; }
  /// Branching k for diamonds; 0 for Laakso graphs.
  int branching() const { return branching_; }
  /// Number of edges that replace one edge per level: 6 or 2k.
  int arity() const { return kind_ == GraphKind::laakso ? 6 : 2 * branching_; }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t index) const { return edges_[index]; }
  std::uint32_t bottom() const { return 0; }
  std::uint32_t top() const { return 1; }

  /// (neighbour, edge index) pairs, sorted by neighbour.
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& neighbours(std::uint32_t v) const {
    return adjacency_[v];
  }
  std::optional<std::uint32_t> find_edge(std::uint32_t u, std::uint32_t v) const;

  /// Full-length address of an edge.
  SubAddress edge_address(std::size_t edge) const;
  /// The level-j sub-copy containing `edge`.
  SubAddress copy_containing(std::size_t edge, int j) const;

  std::string kind_name() const { return kind_ == GraphKind::laakso ? "laakso" : "diamond"; }

  friend RecursiveGraph build_laakso(int n, std::size_t max_edges);
  friend RecursiveGraph build_diamond(int n, int k, std::size_t max_edges);

 private:
  RecursiveGraph(GraphKind kind, int level, int branching) : kind_(kind), level_(level), branching_(branching) {}
  void finalize();

  GraphKind kind_;
  int level_;
  int branching_;
  std::size_t vertex_count_ = 2;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adjacency_;
};

/// Edge count arity^n, or throws CapacityError once it exceeds max_edges.
std::size_t checked_edge_count(int arity, int n, std::size_t max_edges);

/// L_n. Edge index 0..5 of L_1 are the sub-copies A..F: A bottom, B and C the
/// right path, D and E the left path, F top.
RecursiveGraph build_laakso(int n, std::size_t max_edges = kDefaultMaxEdges);

/// D_{n,k}. Within each replacement gadget, digits 2p and 2p+1 are the lower
/// and upper edge of the p-th path, matching cell order of the interval model.
RecursiveGraph build_diamond(int n, int k, std::size_t max_edges = kDefaultMaxEdges);

/// All level-j sub-copies in lexicographic order; 1 <= j <= n.
std::vector<SubAddress> sub_copies(const RecursiveGraph& g, int j);

/// Finite metric space with named points and a dense rational distance table.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::vector<std::string> names, std::vector<Rational> distances);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const Rational& operator()(std::size_t u, std::size_t v) const { return dist_[u * names_.size() + v]; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Same points, every distance multiplied by factor > 0.
  FiniteMetricSpace scaled(const Rational& factor) const;

  /// Symmetry, zero diagonal, positivity and all triangle inequalities.
  /// Returns an empty string when valid, otherwise a description of the
  /// first violation.
  std::string validation_error() const;
  bool is_valid() const { return validation_error().empty(); }

 private:
  std::vector<std::string> names_;
  std::vector<Rational> dist_;
};

/// All-pairs unweighted shortest-path distances (repeated BFS). Points are
/// named by vertex index.
FiniteMetricSpace shortest_path_metric(const RecursiveGraph& g);

/// Hop distances from `source` to every vertex.
std::vector<std::uint32_t> bfs_distances(const RecursiveGraph& g, std::uint32_t source);

}  // namespace tcs
