#include <gtest/gtest.h>

#include <cmath>

#include "treecap/blowups.hpp"
#include "treecap/extremal_fields.hpp"
#include "treecap/instances.hpp"
#include "treecap/quadrature.hpp"

using namespace treecap;

namespace {

ExtremalSolution sample_solution(const BergmanTree& tree, std::uint64_t seed) {
  Rng rng(seed);
  return cap_recursive(tree, random_stopping_time(tree, rng, 6, 4, tree.max_level()));
}

}  // namespace

TEST(PhiField, AtomsCarryPositiveWeights) {
  BergmanTree t(10, 0.0);
  ExtremalSolution sol = sample_solution(t, 3);
  std::vector<Atom> atoms = atoms_of(t, sol);
  ASSERT_FALSE(atoms.empty());
  double total = 0.0;
  for (const Atom& a : atoms) {
    EXPECT_GT(a.weight, 0.0);
    EXPECT_EQ(a.point, t.index_point(a.node));
    total += a.weight * a.weight;
  }
  EXPECT_NEAR(total, sol.cap, 1e-12);
}

TEST(PhiField, EqualsGammaOfG) {
  BergmanTree t(10, 0.0);
  ExtremalSolution sol = sample_solution(t, 3);
  for (double s : {0.0, 1.0}) {
    PhiField phi = build_phi(t, sol, s);
    GField g = build_g(t, sol, s);
    for (Complex z : {Complex(0, 0), Complex(0.3, 0.4), Complex(-0.7, 0.1)}) {
      EXPECT_NEAR(std::abs(phi(z) - gamma_of_g(g, z)), 0.0, 1e-10 * (1.0 + std::abs(phi(z))));
    }
  }
}

TEST(PhiField, DerivativeMatchesFiniteDifference) {
  BergmanTree t(8, 0.0);
  PhiField phi = build_phi(t, sample_solution(t, 5), 0.5);
  Complex z(0.2, 0.5);
  const double h = 1e-6;
  Complex fd = (phi(z + h) - phi(z - h)) / (2.0 * h);
  EXPECT_NEAR(std::abs(fd - phi.derivative(z)), 0.0, 1e-6 * std::abs(phi.derivative(z)));
}

TEST(PhiField, SeminormMatchesAreaIntegral) {
  BergmanTree t(6, 0.0);
  PhiField phi = build_phi(t, sample_solution(t, 7), 0.0);
  QuadratureRule rule = QuadratureRule::graded(14, 8, 512);
  double area = integrate_disk([&](Complex z) { return std::norm(phi.derivative(z)); }, rule);
  EXPECT_NEAR(phi.dirichlet_seminorm_sq(), area, 1e-4 * area);
}

TEST(GField, NormIsAssembledFromFactors) {
  BergmanTree t(8, 0.0);
  ExtremalSolution sol = sample_solution(t, 9);
  GField g = build_g(t, sol, 1.0);
  double direct = 0.0;
  for (std::size_t i = 0; i < g.atoms().size(); ++i) {
    direct += integrate_disk([&](Complex w) { return std::norm(g(w)); }, g.ball_rule(i));
  }
  EXPECT_NEAR(g.norm_sq(), direct, 1e-8 * direct);
  // Balls are disjoint for c = 1/8, so the norm is comparable to the capacity.
  EXPECT_GT(g.norm_sq(), 0.0);
}

TEST(PhiEstimates, PositiveOnTargetsAtZeroWeight) {
  PhiBatch batch = phi_estimate_batch(12, 0.0, 8, 11);
  ASSERT_EQ(batch.reports.size(), 8u);
  for (const PhiEstimateReport& r : batch.reports) {
    EXPECT_GT(r.min_re_target, 0.0);
    EXPECT_GT(r.tent_samples, 0u);
    EXPECT_GT(r.off_samples, 0u);
    EXPECT_TRUE(std::isfinite(r.max_oscillation));
    EXPECT_TRUE(std::isfinite(r.max_off_source));
  }
}

TEST(Omega, LayersPartitionAtoms) {
  BergmanTree t(8, 0.0);
  std::vector<NodeId> atoms;
  for (std::uint32_t id = 0; id < t.node_count(); ++id) atoms.emplace_back(id);
  OmegaDecomposition d = omega_decomposition(t, Complex(0.3, -0.2), atoms, 1.15);
  std::size_t count = 0;
  for (const auto& [j, layer] : d.layers) {
    count += layer.odd.size() + layer.even.size();
    for (NodeId x : layer.odd) EXPECT_EQ(level_of(x) % 2, 1);
    for (NodeId x : layer.even) EXPECT_EQ(level_of(x) % 2, 0);
  }
  EXPECT_EQ(count, atoms.size());
  EXPECT_THROW(omega_decomposition(t, 0.0, atoms, 1.5), std::invalid_argument);
}

TEST(Omega, DeepAtomsAwayFromZSitInHighLayers) {
  BergmanTree t(8, 0.0);
  std::vector<NodeId> atoms = {node_at(8, 0)};
  OmegaDecomposition d = omega_decomposition(t, Complex(-0.5, 0.0), atoms, 1.15);
  ASSERT_EQ(d.layers.size(), 1u);
  // (1 - |k|^2) / |1 - k z| is about 2^-7 / 1.5, so j is about 40.
  EXPECT_GT(d.layers.begin()->first, 30);
  EXPECT_EQ(d.violations(), 0u);
}

TEST(Schur, ConstantKernelExample) {
  SchurProblem p;
  p.mu = {1, 1};
  p.nu = {1, 1};
  p.omega = {1, 1};
  p.h = {1, 1};
  p.k = {1, 1};
  p.m = {1, 1};
  p.kernel = [](std::size_t, std::size_t, std::size_t) { return 1.0; };
  SchurResult r = schur_bilinear_check(p, 10, 1);
  EXPECT_NEAR(r.a_hat, 2.0, 1e-12);
  EXPECT_NEAR(r.b_hat, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.direct, 2.0 * std::sqrt(2.0), 1e-6);
  EXPECT_TRUE(r.sound());
}

TEST(Schur, BoundDominatesDirectProperty) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    SchurProblem p;
    const std::size_t nx = 4, ny = 3, nz = 5;
    for (std::size_t i = 0; i < nx; ++i) {
      p.mu.push_back(rng.uniform(0.1, 1.0));
      p.h.push_back(rng.uniform(0.5, 2.0));
    }
    for (std::size_t i = 0; i < ny; ++i) {
      p.nu.push_back(rng.uniform(0.1, 1.0));
      p.k.push_back(rng.uniform(0.5, 2.0));
    }
    for (std::size_t i = 0; i < nz; ++i) {
      p.omega.push_back(rng.uniform(0.1, 1.0));
      p.m.push_back(rng.uniform(0.5, 2.0));
    }
    std::vector<double> ker(nx * ny * nz);
    for (double& v : ker) v = rng.uniform(0.0, 1.0);
    p.kernel = [ker, ny, nz](std::size_t x, std::size_t y, std::size_t z) { return ker[(x * ny + y) * nz + z]; };
    EXPECT_TRUE(schur_bilinear_check(p, 20, static_cast<std::uint64_t>(trial)).sound());
  }
}

TEST(SeparatedPair, ValidatesSeparation) {
  BergmanTree t(8, 0.0);
  EXPECT_THROW(SeparatedPair(t, {node_at(4, 0)}, {node_at(4, 0)}, 0.75), std::invalid_argument);
  EXPECT_THROW(SeparatedPair(t, {}, {node_at(4, 0)}, 0.75), std::invalid_argument);
  EXPECT_THROW(SeparatedPair(t, {node_at(4, 0)}, {node_at(4, 8)}, 1.5), std::invalid_argument);
  SeparatedPair pair(t, {node_at(4, 0), node_at(5, 1)}, {node_at(4, 8), node_at(6, 40)}, 0.75);
  EXPECT_GE(SeparatedPair::separation(pair.a_points(), pair.b_points(), 0.75), 1.0);
}

TEST(Bilinear, RatioBoundedBySchurConstants) {
  BergmanTree t(8, 0.0);
  SeparatedPair pair(t, {node_at(4, 0), node_at(5, 1)}, {node_at(4, 8), node_at(6, 40)}, 0.75);
  BilinResult r = verify_bilin(pair, 1.0, 20, 4);
  EXPECT_GT(r.norm_ratio, 0.0);
  EXPECT_LE(r.norm_ratio, r.a_hat * r.b_hat * 1.05);
  EXPECT_GT(bilin_epsilon(0.75, 1.0), 0.0);
  EXPECT_LE(bilin_epsilon(0.75, 1.0), 0.1);
}

TEST(Operator210, BoundedAndDivergentTrends) {
  std::vector<int> levels = {6, 7, 8, 9, 10};
  EXPECT_TRUE(param_condition(0.0, 0.0, 0.0, 2.0));
  Trend bounded = verify_210(0.0, 0.0, 0.0, 2.0, levels);
  EXPECT_TRUE(bounded.bounded);
  EXPECT_LT(bounded.increment_ratio, 0.985);
  // t + 1 >= p (b + 1) breaks the condition and the norms grow.
  EXPECT_FALSE(param_condition(0.0, -0.5, 0.5, 1.0));
  Trend divergent = verify_210(0.0, -0.5, 0.5, 1.0, levels);
  EXPECT_FALSE(divergent.bounded);
  EXPECT_THROW(verify_210(0.0, 0.0, 0.0, 2.0, {6, 7}), std::invalid_argument);
}

TEST(LocalizedSymbol, DerivativeIdentityAtInteriorPoints) {
  Symbol b({0.0, 1.0, Complex(0.5, -0.3), 0.2});
  auto in_region = [](Complex w) { return std::abs(w) > 0.6 && std::abs(std::arg(w)) < 1.0; };
  QuadratureRule rule = QuadratureRule::graded(10, 6, 256);
  LocalizedSymbol loc([&](Complex w) { return b.derivative(w); }, in_region, 1.0, rule);
  EXPECT_GT(loc.inside_count(), 0u);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.4, 0.3), Complex(0.5, -0.5)}) {
    Complex lhs = loc.f_prime_fd(z);
    Complex rhs = b.derivative(z) + loc.lambda(z);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-6 * (1.0 + std::abs(b.derivative(z))));
    EXPECT_NEAR(std::abs(loc.f_prime(z) - lhs), 0.0, 1e-6 * (1.0 + std::abs(lhs)));
  }
}

TEST(SeriesLocalizedSymbol, AgreesWithQuadratureAwayFromTheRegion) {
  BergmanTree t(8, 0.0);
  Symbol b({0.0, 1.0, Complex(0.5, -0.3), 0.2});
  StoppingTime w({node_at(3, 1), node_at(4, 9)});
  SeriesLocalizedSymbol series(b, tent_rectangles(t, w), 1.0);
  auto inside = [&](Complex z) { return series.contains(z); };
  QuadratureRule rule = QuadratureRule::graded(12, 8, 1024);
  LocalizedSymbol quad([&](Complex z) { return b.derivative(z); }, inside, 1.0, rule);
  for (Complex z : {Complex(0.1, -0.2), Complex(-0.3, 0.1), Complex(0.0, -0.6)}) {
    EXPECT_NEAR(std::abs(series.f_prime(z) - quad.f_prime(z)), 0.0, 1e-4 * (1.0 + std::abs(series.f_prime(z))));
    EXPECT_NEAR(std::abs(series.lambda(z) - quad.lambda(z)), 0.0, 1e-4 * (1.0 + std::abs(series.lambda(z))));
  }
}

TEST(SeriesLocalizedSymbol, EmptyRegionGivesMinusIdentity) {
  Symbol b({0.0, 2.0, 1.0});
  SeriesLocalizedSymbol series(b, {}, 0.0);
  Complex z(0.3, 0.1);
  EXPECT_NEAR(std::abs(series.f(z)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(series.lambda(z) + b.derivative(z)), 0.0, 1e-14);
}

TEST(TentRectangles, CoverTheTreeTent) {
  BergmanTree t(6, 0.0);
  StoppingTime w({node_at(2, 1)});
  std::vector<Box> rects = tent_rectangles(t, w);
  ASSERT_FALSE(rects.empty());
  for (const Box& r : rects) EXPECT_DOUBLE_EQ(r.r_outer, 1.0);
  Box b = t.box(node_at(4, 5));
  Complex z = std::polar(0.5 * (b.r_inner + b.r_outer), b.angle_start + 0.5 * b.angle_width);
  bool covered = false;
  for (const Box& r : rects) covered = covered || r.contains(z);
  EXPECT_TRUE(covered);
}
