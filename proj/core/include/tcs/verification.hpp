#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tcs/graphs.hpp"

namespace tcs {

struct Check {
  std::string what;
  std::string expected;
  std::string computed;
  bool ok = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;
  double time_limit = 0;  // 0: none
  std::string error;      // exception text, if one escaped
  bool pass() const;
  /// First failing check as "what: expected X, computed Y".
  std::string detail() const;
};

struct VerifyOptions {
  int max_n = 5;  // caps every level bound below
  std::uint64_t seed = 20240601;
  bool enforce_time = true;
  std::size_t max_edges = kDefaultMaxEdges;
};

/// 1 .. 12
std::vector<int> criterion_ids();
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const VerifyOptions& opts = {});
std::vector<CriterionResult> run_all(const VerifyOptions& opts = {});

}  // namespace tcs
