#include "tcs/json_io.hpp"

#include <string>

#include "tcs/errors.hpp"

namespace tcs {

json to_json(const Rational& r) { return to_string(r); }

json with_decimal(const Rational& r) { return {{"value", to_string(r)}, {"decimal", to_double(r)}}; }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_number_float()) return parse_rational(j.dump());
  throw ParseError("expected a rational, got " + j.dump());
}

json graph_to_json(const RecursiveGraph& g) {
  json out;
  out["kind"] = g.kind_name();
  out["n"] = g.level();
  if (g.kind() == GraphKind::diamond) out["k"] = g.branching();
  out["vertices"] = g.vertex_count();
  json edges = json::array(), addr = json::array();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    edges.push_back({g.edge(e).tail, g.edge(e).head});
    addr.push_back(g.edge_address(e).to_string());
  }
  out["edges"] = std::move(edges);
  out["addresses"] = std::move(addr);
  return out;
}

json vector_to_json(const EdgeVector& x) {
  json out = json::object();
  for (const auto& [e, v] : x.entries()) out[std::to_string(e)] = to_string(v);
  return out;
}

EdgeVector vector_from_json(const json& j, std::size_t dim) {
  if (!j.is_object()) throw ParseError("edge vector must be a JSON object");
  std::vector<EdgeVector::Entry> entries;
  for (const auto& [key, val] : j.items()) {
    std::size_t pos = 0;
    unsigned long e = 0;
    try {
      e = std::stoul(key, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad edge index '" + key + "'");
    }
    if (pos != key.size()) throw ParseError("bad edge index '" + key + "'");
    if (e >= dim) throw ParseError("edge index " + key + " out of range");
    entries.emplace_back(static_cast<std::uint32_t>(e), rational_from_json(val));
  }
  return EdgeVector(dim, std::move(entries));
}

json basis_to_json(const OrthogonalBasis& basis) {
  json out;
  out["n"] = basis.level();
  out["dim"] = basis.dim();
  out["cycle_count"] = basis.cycle_count();
  out["cut_count"] = basis.size() - basis.cycle_count();
  json elems = json::array();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& b = basis[i];
    elems.push_back({{"index", i},
                     {"label", b.label()},
                     {"class", to_string(b.cls)},
                     {"level", b.level},
                     {"support", b.support.to_string()},
                     {"norm2", to_string(basis.norm2(i))},
                     {"vector", vector_to_json(b.vector)}});
  }
  out["elements"] = std::move(elems);
  return out;
}

FiniteMetricSpace space_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j.contains("dist"))
    throw ParseError("space needs 'points' and 'dist'");
  std::vector<std::string> names;
  for (const auto& p : j["points"]) {
    if (p.is_string()) {
      names.push_back(p.get<std::string>());
    } else if (p.is_number_integer()) {
      names.push_back(std::to_string(p.get<long long>()));
    } else {
      throw ParseError("point names must be strings or integers");
    }
  }
  const std::size_t m = names.size();
  const auto& d = j["dist"];
  if (!d.is_array() || d.size() != m) throw ParseError("'dist' must be an m x m array");
  std::vector<Rational> dist;
  dist.reserve(m * m);
  for (const auto& row : d) {
    if (!row.is_array() || row.size() != m) throw ParseError("'dist' must be an m x m array");
    for (const auto& v : row) dist.push_back(rational_from_json(v));
  }
  FiniteMetricSpace s(std::move(names), std::move(dist));
  if (auto err = s.validation_error(); !err.empty()) throw ParseError("not a metric: " + err);
  return s;
}

json space_to_json(const FiniteMetricSpace& space) {
  json d = json::array();
  for (std::size_t u = 0; u < space.size(); ++u) {
    json row = json::array();
    for (std::size_t v = 0; v < space.size(); ++v) row.push_back(to_string(space(u, v)));
    d.push_back(std::move(row));
  }
  return {{"points", space.names()}, {"dist", std::move(d)}};
}

TransportProblem problem_from_json(const json& j, const FiniteMetricSpace& space) {
  if (!j.is_object() || !j.contains("values") || !j["values"].is_object())
    throw ParseError("problem needs a 'values' object");
  TransportProblem p{std::vector<Rational>(space.size())};
  for (const auto& [name, val] : j["values"].items()) {
    auto idx = space.index_of(name);
    if (!idx) throw ParseError("unknown point '" + name + "'");
    p.values[*idx] += rational_from_json(val);
  }
  return p;
}

json plan_to_json(const TransportPlan& plan, const FiniteMetricSpace& space) {
  json out = json::array();
  for (const auto& s : plan.steps)
    out.push_back({space.names()[s.source], space.names()[s.sink], to_string(s.amount)});
  return out;
}

}  // namespace tcs
