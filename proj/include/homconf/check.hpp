#pragma once

#include <string>
#include <utility>
#include <vector>

namespace homconf {

// Outcome of one verification pass. Checks never stop at the first failure:
// every witness tuple with a nonzero residual is recorded, in deterministic
// tuple order. `inconclusive` lists witnesses a truncated-degree check could
// not decide (only span-membership checks ever produce these).
struct CheckReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> residuals; // witness -> residual
  std::vector<std::string> inconclusive;
  std::vector<std::string> notes;

  bool pass() const { return residuals.empty() && inconclusive.empty(); }
  const char* status() const {
    if (!residuals.empty()) return "fail";
    if (!inconclusive.empty()) return "inconclusive";
    return "pass";
  }
  void add(const std::string& witness, const std::string& residual) {
    residuals.emplace_back(witness, residual);
  }
};

} // namespace homconf
