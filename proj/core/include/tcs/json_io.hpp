#pragma once

#include <nlohmann/json.hpp>

#include "tcs/edgespace.hpp"
#include "tcs/graphs.hpp"
#include "tcs/rational.hpp"
#include "tcs/spaces.hpp"
#include "tcs/transport.hpp"

namespace tcs {

using json = nlohmann::ordered_json;

/// "p/q"
json to_json(const Rational& r);
/// {"value": "p/q", "decimal": 0.5}
json with_decimal(const Rational& r);
/// Accepts "p/q" strings, decimal strings and JSON integers.
Rational rational_from_json(const json& j);

/// {kind, n, k?, vertices, edges: [[tail, head], ...], addresses: [...]}
json graph_to_json(const RecursiveGraph& g);
/// {"edge-index": "p/q", ...}; zero entries are omitted.
json vector_to_json(const EdgeVector& x);
EdgeVector vector_from_json(const json& j, std::size_t dim);
json basis_to_json(const OrthogonalBasis& basis);

/// {points: [names], dist: [[...], ...]}; entries are rationals as above.
FiniteMetricSpace space_from_json(const json& j);
json space_to_json(const FiniteMetricSpace& space);
/// {values: {point: "p/q", ...}}; unlisted points are 0.
TransportProblem problem_from_json(const json& j, const FiniteMetricSpace& space);
/// [[u, v, "p/q"], ...] with point names.
json plan_to_json(const TransportPlan& plan, const FiniteMetricSpace& space);

}  // namespace tcs
