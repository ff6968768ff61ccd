#include <gtest/gtest.h>

#include <cmath>

#include "treecap/instances.hpp"
#include "treecap/tree_capacity.hpp"

using namespace treecap;

namespace {

// Brute-force extremal for a single target chain: h = 1/d on the path.
double chain_capacity_oracle(int d) { return 1.0 / d; }

// For full level l, by symmetry h is constant per level; minimizing sum 2^k a_k^2 with sum a_k = 1 gives
// a_k proportional to 2^-k and capacity 1 / sum_k 2^-k.
double full_level_oracle(int l) {
  double s = 0.0;
  for (int k = 0; k <= l; ++k) s += std::ldexp(1.0, -k);
  return 1.0 / s;
}

}  // namespace

TEST(TreeFunction, PathSumAndDiffAreInverse) {
  Rng rng(4);
  TreeFunction f(7);
  for (std::uint32_t id = 0; id < f.size(); ++id) f[NodeId(id)] = rng.normal();
  TreeFunction g = path_diff(path_sum(f));
  for (std::uint32_t id = 0; id < f.size(); ++id) EXPECT_NEAR(g[NodeId(id)], f[NodeId(id)], 1e-12);
  TreeFunction sum = path_sum(f);
  EXPECT_NEAR(sum[node_at(2, 3)], f[kRoot] + f[node_at(1, 1)] + f[node_at(2, 3)], 1e-14);
}

TEST(TreeFunction, RejectsWrongSize) { EXPECT_THROW(TreeFunction(3, std::vector<double>(10)), std::invalid_argument); }

TEST(Capacity, ChainIsOneOverDepth) {
  BergmanTree t(19, 0.0);
  for (int d = 1; d <= 20; ++d) {
    ExtremalSolution sol = cap_recursive(t, StoppingTime({node_at(d - 1, 0)}));
    EXPECT_NEAR(sol.cap, chain_capacity_oracle(d), 1e-14);
    EXPECT_NEAR(sol.h[kRoot], 1.0 / d, 1e-14);
  }
}

TEST(Capacity, TwoChildrenAndFullLevels) {
  BergmanTree t(8, 0.0);
  EXPECT_NEAR(cap_recursive(t, StoppingTime({node_at(1, 0), node_at(1, 1)})).cap, 2.0 / 3.0, 1e-14);
  for (int l = 1; l <= 6; ++l) {
    const double expected = full_level_oracle(l);
    EXPECT_NEAR(expected, 1.0 / (2.0 - std::ldexp(1.0, -l)), 1e-15);
    EXPECT_NEAR(cap_recursive(t, StoppingTime(t.level_nodes(l))).cap, expected, 1e-12);
  }
}

TEST(Capacity, EmptyTargetsAndRoot) {
  BergmanTree t(4, 0.0);
  EXPECT_THROW(cap_recursive(t, StoppingTime()), std::invalid_argument);
  EXPECT_NEAR(cap_recursive(t, StoppingTime({kRoot})).cap, 1.0, 1e-15);
}

TEST(Capacity, RecursionMatchesOracleProperty) {
  for (int depth : {4, 6, 8}) {
    BergmanTree t(depth, 0.0);
    for (std::uint64_t i = 0; i < 40; ++i) {
      Rng rng(instance_seed(77, i));
      StoppingTime st = random_stopping_time(t, rng, rng.between(1, 30), 1, depth);
      ExtremalSolution sol = cap_recursive(t, st);
      EXPECT_NEAR(sol.cap, qp_oracle(t, st), 1e-9 * sol.cap);
      EXPECT_NEAR(capacity(t, st), sol.cap, 1e-12 * sol.cap);
    }
  }
}

TEST(Capacity, ExtremalInvariantsProperty) {
  BergmanTree t(10, 0.0);
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng(instance_seed(78, i));
    StoppingTime st = random_stopping_time(t, rng, rng.between(1, 60), 0, 10);
    ExtremalSolution sol = cap_recursive(t, st);
    VerificationReport rep = verify_extremal(sol);
    EXPECT_TRUE(rep.ok()) << rep.max_violation();
    EXPECT_NEAR(sol.h[kRoot], sol.h.sum_of_squares(), 1e-12);
    EXPECT_LE(sol.cap, 1.0 + 1e-15);
    for (NodeId x : st) EXPECT_NEAR(sol.H[x], 1.0, 1e-12);
  }
}

TEST(Capacity, MonotoneUnderEnlargementProperty) {
  BergmanTree t(9, 0.0);
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng(instance_seed(79, i));
    StoppingTime a = random_stopping_time(t, rng, rng.between(1, 20), 1, 9);
    std::vector<NodeId> more = a.nodes();
    for (int k = 0; k < 5; ++k) more.push_back(node_at(9, static_cast<std::uint32_t>(rng.below(512))));
    StoppingTime b = minimal_elements(more);
    EXPECT_LE(capacity(t, a), capacity(t, b) + 1e-14);
    // Moving every target one level up can only increase the capacity.
    std::vector<NodeId> up;
    for (NodeId x : a) up.push_back(level_of(x) > 0 ? parent_of(x) : x);
    EXPECT_LE(capacity(t, a), capacity(t, minimal_elements(up)) + 1e-14);
  }
}

TEST(Condenser, ExampleTwoChains) {
  BergmanTree t(6, 0.0);
  StoppingTime e({node_at(1, 0), node_at(1, 1)});
  StoppingTime f({node_at(3, 0), node_at(3, 7)});
  ExtremalSolution sol = cap_condenser(t, CondenserProblem(t, e, f));
  EXPECT_NEAR(sol.cap, 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(sol.cap, qp_oracle(t, CondenserProblem(t, e, f)), 1e-10);
  EXPECT_TRUE(verify_extremal(sol).ok());
}

TEST(Condenser, RejectsTargetsNotBelowSources) {
  BergmanTree t(4, 0.0);
  StoppingTime e({node_at(2, 0)});
  EXPECT_THROW(CondenserProblem(t, e, StoppingTime({node_at(2, 0)})), std::invalid_argument);
  EXPECT_THROW(CondenserProblem(t, e, StoppingTime({node_at(3, 7)})), std::invalid_argument);
}

TEST(Condenser, MatchesOracleAndSumBoundProperty) {
  BergmanTree t(9, 0.0);
  for (std::uint64_t i = 0; i < 60; ++i) {
    Rng rng(instance_seed(80, i));
    auto [e, f] = random_condenser(t, rng, rng.between(1, 15));
    CondenserProblem problem(t, e, f);
    ExtremalSolution sol = cap_condenser(t, problem);
    EXPECT_NEAR(sol.cap, qp_oracle(t, problem), 1e-9 * sol.cap);
    EXPECT_TRUE(verify_extremal(sol).ok());
    StoppingTime s = random_stopping_time(t, rng, rng.between(1, 30), 0, 9);
    EXPECT_TRUE(stopping_time_sum_check(sol, s).holds);
    // Sum of h over the sources equals the energy.
    double at_sources = 0.0;
    for (NodeId x : e) at_sources += sol.h[x];
    EXPECT_NEAR(at_sources, sol.h.sum_of_squares(), 1e-12);
  }
}

TEST(QpOracle, HandlesSingleTargets) {
  BergmanTree t(5, 0.0);
  EXPECT_NEAR(qp_oracle(t, StoppingTime({node_at(5, 9)})), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(qp_oracle(t, StoppingTime({kRoot})), 1.0, 1e-12);
}
