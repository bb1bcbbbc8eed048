#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wtrace::verify {

struct CheckResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteOptions {
  unsigned seed = 1;
  int threads = 0;
  /// Called after every check, e.g. for progress output.
  std::function<void(const CheckResult&)> on_result;
};

/// Property suite over geometry, coefficients, operators, runner and config.
std::vector<CheckResult> run_invariant_suite(const SuiteOptions& opt = {});

}  // namespace wtrace::verify
