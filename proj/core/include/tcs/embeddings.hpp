#pragma once

#include <cstddef>
#include <vector>

#include "tcs/graphs.hpp"
#include "tcs/transport.hpp"

namespace tcs {

/// Six points a..f: distance 1 among a..d and between e and f, 1/2 across.
FiniteMetricSpace metric_T();
/// Eight points a..h: distance 1 within a..d and within e..h, 1/2 across.
FiniteMetricSpace metric_F();

/// f_1, f_2, f_3 on T.
std::vector<TransportProblem> problems_T();
/// f_1 .. f_4 on F.
std::vector<TransportProblem> problems_F();

struct SignPattern {
  std::vector<int> theta;  // entries +1 / -1
  Rational norm;
};

struct LinftyReport {
  std::size_t patterns = 0;
  Rational max_deviation;          // max |norm - 1| over all patterns
  std::vector<SignPattern> norms;  // in binary order, bit i set means theta_i = -1
  std::size_t rank = 0;            // rank of the problem vectors
  bool isometric() const { return max_deviation == 0 && rank == norms.front().theta.size(); }
};

/// TC norm of sum theta_i f_i for all 2^k sign patterns, exact, in parallel.
LinftyReport verify_linfty(const FiniteMetricSpace& space, const std::vector<TransportProblem>& problems);

/// Rank of the value vectors, exact.
std::size_t problem_rank(const std::vector<TransportProblem>& problems);

}  // namespace tcs
