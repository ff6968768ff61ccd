#include "treecap/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "treecap/instances.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

void for_each_instance(std::size_t count, bool parallel, const std::function<void(std::size_t)>& body) {
  unsigned workers = parallel ? std::max(1u, std::thread::hardware_concurrency()) : 1u;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

LemmaReport aggregate(const std::string& name, const std::vector<LemmaCheck>& checks) {
  LemmaReport report;
  report.lemma = name;
  report.instances = checks.size();
  for (const LemmaCheck& c : checks) {
    if (!c.holds) ++report.violations;
    if (!c.applicable) continue;
    ++report.applicable;
    if (c.rhs > 0.0) report.worst_ratio = std::max(report.worst_ratio, c.lhs / c.rhs);
  }
  return report;
}

LemmaCheck extcondenser_check(Rng& rng) {
  const BergmanTree tree(10, 0.0);
  auto [upper, deep] = random_condenser(tree, rng, rng.between(2, 12));
  ExtremalSolution sol = cap_condenser(tree, CondenserProblem(tree, upper, deep));
  StoppingTime s = random_stopping_time(tree, rng, rng.between(1, 40), 0, tree.max_level());
  StoppingTimeSum sum = stopping_time_sum_check(sol, s);
  return {sum.sum, sum.bound, true, sum.holds};
}

}  // namespace

std::vector<LemmaReport> run_blowup_suite(const SuiteOptions& options) {
  const std::size_t n = options.instances;
  std::vector<LemmaCheck> contain(n), newblowup(n), newcondenser(n), extcondenser(n);
  const BergmanTree tree(options.max_level, 0.0);
  const int anchor_hi = std::max(1, std::min(12, options.max_level - 4));
  const int anchor_lo = std::min(8, anchor_hi);

  for_each_instance(n, options.parallel, [&](std::size_t i) {
    Rng rng(instance_seed(options.seed, i));
    const double rho = 0.3 + 0.1 * static_cast<double>(i % 3);
    StoppingTime w = random_clustered_stopping_time(tree, rng, rng.between(anchor_lo, anchor_hi), rng.between(1, 4));
    ContainCheck c = verify_contain(tree, w, rho);
    contain[i] = {c.bound.lhs, c.bound.rhs, true, c.holds()};
    newblowup[i] = verify_newblowup(tree, w, rho);
    newcondenser[i] = verify_newcondenser(tree, w, rho);
    extcondenser[i] = extcondenser_check(rng);
  });

  return {aggregate("contain", contain), aggregate("newblowup", newblowup), aggregate("newcondenser", newcondenser),
          aggregate("extcondenser", extcondenser)};
}

std::vector<LemmaReport> run_capacity_suite(const SuiteOptions& options) {
  const std::size_t n = options.instances;
  std::vector<LemmaCheck> oracle(n), extremal(n);
  const int depth = std::min(options.max_level, 10);

  for_each_instance(n, options.parallel, [&](std::size_t i) {
    Rng rng(instance_seed(options.seed, i));
    const BergmanTree tree(depth, 0.0);
    StoppingTime st = random_stopping_time(tree, rng, rng.between(1, 60), 1, depth);
    ExtremalSolution sol = cap_recursive(tree, st);
    const double q = qp_oracle(tree, st);
    const double rel = std::abs(q - sol.cap) / sol.cap;
    oracle[i] = {rel, 1e-8, true, rel <= 1e-8};
    const double v = verify_extremal(sol).max_violation();
    extremal[i] = {v, 1e-10, true, v <= 1e-10};
  });

  return {aggregate("oracle", oracle), aggregate("extremal", extremal)};
}

}  // namespace treecap
