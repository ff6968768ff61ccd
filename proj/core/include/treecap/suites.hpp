#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treecap/blowups.hpp"

namespace treecap {

struct SuiteOptions {
  int max_level = 18;
  std::size_t instances = 300;
  std::uint64_t seed = 42;
  /// Evaluate instances on several threads; reports are aggregated in instance order either way.
  bool parallel = false;
};

/// Randomized blowup lemmas: "contain", "newblowup", "newcondenser" and "extcondenser" (sum of h over a
/// stopping time against 2 Cap for condenser extremals). Instance i draws from instance_seed(seed, i).
std::vector<LemmaReport> run_blowup_suite(const SuiteOptions& options);

/// Extremal solver checks: "oracle" (recursion against the QP oracle, relative difference, 1e-8) and
/// "extremal" (harmonicity, energy and boundary residuals, 1e-10).
std::vector<LemmaReport> run_capacity_suite(const SuiteOptions& options);

/// Runs `body(i)` for i in [0, count), on hardware threads when `parallel` is set.
void for_each_instance(std::size_t count, bool parallel, const std::function<void(std::size_t)>& body);

}  // namespace treecap
