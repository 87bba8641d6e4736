#include "tcs/graphs.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

#include "tcs/errors.hpp"

namespace tcs {

namespace {

std::size_t upow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

SubAddress::SubAddress(int arity, int graph_level, std::vector<std::uint8_t> digits)
    : arity_(arity), graph_level_(graph_level), digits_(std::move(digits)) {
  if (static_cast<int>(digits_.size()) > graph_level_) throw DomainError("address longer than graph level");
  for (auto d : digits_)
    if (d >= arity_) throw DomainError("address digit out of range");
}

std::size_t SubAddress::first_edge() const {
  std::size_t idx = 0;
  for (auto d : digits_) idx = idx * arity_ + d;
  return idx * edge_count();
}

std::size_t SubAddress::edge_count() const { return upow(arity_, level()); }

bool SubAddress::contains(const SubAddress& other) const {
  if (other.arity_ != arity_ || other.graph_level_ != graph_level_) return false;
  if (other.digits_.size() < digits_.size()) return false;
  return std::equal(digits_.begin(), digits_.end(), other.digits_.begin());
}

SubAddress SubAddress::child(std::uint8_t digit) const {
  if (level() == 0) throw DomainError("level-0 copy has no children");
  auto d = digits_;
  d.push_back(digit);
  return {arity_, graph_level_, std::move(d)};
}

SubAddress SubAddress::parent() const {
  if (digits_.empty()) throw DomainError("root address has no parent");
  auto d = digits_;
  d.pop_back();
  return {arity_, graph_level_, std::move(d)};
}

std::uint8_t SubAddress::child_digit_of(std::size_t edge) const {
  if (!contains_edge(edge)) throw DomainError("edge outside sub-copy");
  std::size_t block = upow(arity_, level() - 1);
  return static_cast<std::uint8_t>((edge - first_edge()) / block);
}

std::string SubAddress::to_string() const {
  std::string s;
  if (arity_ == 6) {
    for (auto d : digits_) s.push_back(static_cast<char>('A' + d));
    return s;
  }
  static const char* sym = "0123456789abcdefghijklmnopqrstuvwxyz";
  if (arity_ <= 36) {
    for (auto d : digits_) s.push_back(sym[d]);
    return s;
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < digits_.size(); ++i) os << (i ? "." : "") << int(digits_[i]);
  return os.str();
}

std::optional<std::uint32_t> RecursiveGraph::find_edge(std::uint32_t u, std::uint32_t v) const {
  if (u >= vertex_count_) return std::nullopt;
  const auto& adj = adjacency_[u];
  auto it = std::lower_bound(adj.begin(), adj.end(), std::make_pair(v, std::uint32_t{0}));
  if (it != adj.end() && it->first == v) return it->second;
  return std::nullopt;
}

SubAddress RecursiveGraph::edge_address(std::size_t edge) const { return copy_containing(edge, 0); }

SubAddress RecursiveGraph::copy_containing(std::size_t edge, int j) const {
  if (edge >= edges_.size()) throw DomainError("edge index out of range");
  if (j < 0 || j > level_) throw DomainError("level out of range");
  std::vector<std::uint8_t> digits(level_ - j);
  std::size_t idx = edge / upow(arity(), j);
  for (int i = level_ - j - 1; i >= 0; --i) {
    digits[i] = static_cast<std::uint8_t>(idx % arity());
    idx /= arity();
  }
  return {arity(), level_, std::move(digits)};
}

void RecursiveGraph::finalize() {
  adjacency_.assign(vertex_count_, {});
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    adjacency_[edges_[i].tail].emplace_back(edges_[i].head, i);
    adjacency_[edges_[i].head].emplace_back(edges_[i].tail, i);
  }
  for (auto& a : adjacency_) std::sort(a.begin(), a.end());
}

std::size_t checked_edge_count(int arity, int n, std::size_t max_edges) {
  if (n < 0) throw DomainError("level must be nonnegative");
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) {
    if (count > max_edges / arity) {
      throw CapacityError("edge count " + std::to_string(arity) + "^" + std::to_string(n) + " exceeds cap " +
                          std::to_string(max_edges));
    }
    count *= arity;
  }
  if (count > max_edges) throw CapacityError("edge count exceeds cap " + std::to_string(max_edges));
  return count;
}

RecursiveGraph build_laakso(int n, std::size_t max_edges) {
  checked_edge_count(6, n, max_edges);
  RecursiveGraph g(GraphKind::laakso, n, 0);
  g.edges_ = {{0, 1}};
  std::uint32_t next = 2;
  for (int level = 0; level < n; ++level) {
    std::vector<Edge> out;
    out.reserve(g.edges_.size() * 6);
    for (const auto& e : g.edges_) {
      // fresh: b (after A), mR (B/C path), m (merge), mL (D/E path)
      std::uint32_t b = next, mr = next + 1, m = next + 2, ml = next + 3;
      next += 4;
      out.push_back({e.tail, b});
      out.push_back({b, mr});
      out.push_back({mr, m});
      out.push_back({b, ml});
      out.push_back({ml, m});
      out.push_back({m, e.head});
    }
    g.edges_ = std::move(out);
  }
  g.vertex_count_ = next;
  g.finalize();
  return g;
}

RecursiveGraph build_diamond(int n, int k, std::size_t max_edges) {
  if (k < 2) throw DomainError("diamond branching must be at least 2");
  checked_edge_count(2 * k, n, max_edges);
  RecursiveGraph g(GraphKind::diamond, n, k);
  g.edges_ = {{0, 1}};
  std::uint32_t next = 2;
  for (int level = 0; level < n; ++level) {
    std::vector<Edge> out;
    out.reserve(g.edges_.size() * 2 * k);
    for (const auto& e : g.edges_) {
      for (int p = 0; p < k; ++p) {
        std::uint32_t mid = next++;
        out.push_back({e.tail, mid});
        out.push_back({mid, e.head});
      }
    }
    g.edges_ = std::move(out);
  }
  g.vertex_count_ = next;
  g.finalize();
  return g;
}

std::vector<SubAddress> sub_copies(const RecursiveGraph& g, int j) {
  if (j < 1 || j > g.level()) {
    throw DomainError("sub-copy level " + std::to_string(j) + " outside [1, " + std::to_string(g.level()) + "]");
  }
  const int len = g.level() - j;
  const std::size_t count = upow(g.arity(), len);
  std::vector<SubAddress> out;
  out.reserve(count);
  std::vector<std::uint8_t> digits(len, 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t idx = c;
    for (int i = len - 1; i >= 0; --i) {
      digits[i] = static_cast<std::uint8_t>(idx % g.arity());
      idx /= g.arity();
    }
    out.emplace_back(g.arity(), g.level(), digits);
  }
  return out;
}

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> names, std::vector<Rational> distances)
    : names_(std::move(names)), dist_(std::move(distances)) {
  if (dist_.size() != names_.size() * names_.size()) throw DomainError("distance table has wrong size");
}

std::optional<std::size_t> FiniteMetricSpace::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

FiniteMetricSpace FiniteMetricSpace::scaled(const Rational& factor) const {
  if (factor <= 0) throw DomainError("scale factor must be positive");
  auto d = dist_;
  for (auto& x : d) x *= factor;
  return {names_, std::move(d)};
}

std::string FiniteMetricSpace::validation_error() const {
  const std::size_t m = size();
  const auto& d = *this;
  for (std::size_t u = 0; u < m; ++u) {
    if (d(u, u) != 0) return "nonzero diagonal at " + names_[u];
    for (std::size_t v = u + 1; v < m; ++v) {
      if (d(u, v) != d(v, u)) return "asymmetric pair " + names_[u] + "," + names_[v];
      if (d(u, v) <= 0) return "nonpositive distance " + names_[u] + "," + names_[v];
    }
  }
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v)
      for (std::size_t w = 0; w < m; ++w)
        if (d(u, v) > d(u, w) + d(w, v))
          return "triangle inequality fails for " + names_[u] + "," + names_[v] + " via " + names_[w];
  return {};
}

std::vector<std::uint32_t> bfs_distances(const RecursiveGraph& g, std::uint32_t source) {
  constexpr auto unseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(g.vertex_count(), unseen);
  std::deque<std::uint32_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto [v, e] : g.neighbours(u)) {
      (void)e;
      if (dist[v] == unseen) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

FiniteMetricSpace shortest_path_metric(const RecursiveGraph& g) {
  const std::size_t m = g.vertex_count();
  std::vector<std::string> names(m);
  for (std::size_t i = 0; i < m; ++i) names[i] = std::to_string(i);
  std::vector<Rational> d(m * m);
  for (std::uint32_t s = 0; s < m; ++s) {
    auto row = bfs_distances(g, s);
    for (std::size_t t = 0; t < m; ++t) {
      if (row[t] == std::numeric_limits<std::uint32_t>::max()) throw DomainError("graph is not connected");
      d[s * m + t] = row[t];
    }
  }
  return {std::move(names), std::move(d)};
}

}  // namespace tcs
