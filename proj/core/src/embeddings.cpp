#include "tcs/embeddings.hpp"

#include "tcs/errors.hpp"
#include "tcs/linalg.hpp"
#include "tcs/parallel.hpp"

namespace tcs {

namespace {

FiniteMetricSpace two_clusters(std::size_t left, std::size_t right) {
  const std::size_t m = left + right;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  std::vector<Rational> d(m * m);
  for (std::size_t u = 0; u < m; ++u)
    for (std::size_t v = 0; v < m; ++v) {
      if (u == v) continue;
      d[u * m + v] = (u < left) == (v < left) ? Rational(1) : Rational(1, 2);
    }
  FiniteMetricSpace s(std::move(names), std::move(d));
  if (auto err = s.validation_error(); !err.empty()) throw VerificationError("hard-coded metric is invalid: " + err);
  return s;
}

TransportProblem row(std::initializer_list<Rational> v) { return {std::vector<Rational>(v)}; }

const Rational h(1, 2);

}  // namespace

FiniteMetricSpace metric_T() { return two_clusters(4, 2); }
FiniteMetricSpace metric_F() { return two_clusters(4, 4); }

std::vector<TransportProblem> problems_T() {
  return {row({h, -h, h, -h, 0, 0}), row({h, h, -h, -h, 0, 0}), row({0, 0, 0, 0, 1, -1})};
}

std::vector<TransportProblem> problems_F() {
  return {row({h, -h, h, -h, 0, 0, 0, 0}), row({h, h, -h, -h, 0, 0, 0, 0}), row({0, 0, 0, 0, h, -h, h, -h}),
          row({0, 0, 0, 0, h, h, -h, -h})};
}

std::size_t problem_rank(const std::vector<TransportProblem>& problems) {
  if (problems.empty()) return 0;
  RationalMatrix m(problems.size(), problems[0].size());
  for (std::size_t i = 0; i < problems.size(); ++i)
    for (std::size_t j = 0; j < problems[i].size(); ++j) m(i, j) = problems[i].values[j];
  return rank(m);
}

LinftyReport verify_linfty(const FiniteMetricSpace& space, const std::vector<TransportProblem>& problems) {
  const std::size_t k = problems.size();
  if (k == 0 || k > 20) throw DomainError("need between 1 and 20 problems");
  LinftyReport rep;
  rep.patterns = std::size_t{1} << k;
  rep.norms.resize(rep.patterns);
  parallel_for(rep.patterns, [&](std::size_t mask) {
    TransportProblem p{std::vector<Rational>(space.size())};
    SignPattern sp;
    for (std::size_t i = 0; i < k; ++i) {
      const int t = (mask >> i) & 1 ? -1 : 1;
      sp.theta.push_back(t);
      TransportProblem q = problems[i];
      q *= Rational(t);
      p += q;
    }
    sp.norm = tc_norm(space, p).norm;
    rep.norms[mask] = std::move(sp);
  });
  rep.max_deviation = 0;
  for (const auto& sp : rep.norms) rep.max_deviation = std::max(rep.max_deviation, Rational(abs(sp.norm - 1)));
  rep.rank = problem_rank(problems);
  return rep;
}

}  // namespace tcs
