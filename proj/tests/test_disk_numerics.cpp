#include <gtest/gtest.h>

#include <cmath>

#include "treecap/disk_numerics.hpp"
#include "treecap/instances.hpp"
#include "treecap/quadrature.hpp"
#include "treecap/tree_capacity.hpp"

using namespace treecap;

TEST(Quadrature, GaussLegendreIntegratesPolynomials) {
  const GaussLegendre& gl = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * std::pow(gl.nodes[i], 14);
  EXPECT_NEAR(s, 2.0 / 15.0, 1e-14);
}

TEST(Quadrature, RulesHaveUnitMass) {
  EXPECT_NEAR(QuadratureRule::polar(16, 32).total_weight(), 1.0, 1e-13);
  EXPECT_NEAR(QuadratureRule::graded(10, 6, 64).total_weight(), 1.0, 1e-13);
  EXPECT_NEAR(QuadratureRule::focused(Complex(0.9, 0.3), 6).total_weight(), 1.0, 1e-10);
  BergmanTree t(4, 0.0);
  EXPECT_NEAR(QuadratureRule::on_box(t.box(node_at(3, 2)), 6).total_weight(), t.box(node_at(3, 2)).area(), 1e-14);
}

TEST(Quadrature, MomentsOfMonomials) {
  // Integral of |z|^(2n) dA = 1 / (n + 1).
  QuadratureRule rule = QuadratureRule::graded(8, 8, 32);
  for (int n = 0; n < 6; ++n) {
    double v = integrate_disk([n](Complex z) { return std::pow(std::norm(z), n); }, rule);
    EXPECT_NEAR(v, 1.0 / (n + 1), 1e-12);
  }
  EXPECT_THROW(integrate_disk([](Complex) { return std::nan(""); }, rule), std::domain_error);
}

TEST(Intest, RegimesAtBothWeights) {
  for (double t : {0.0, 1.0}) {
    for (double c : {-0.5, 0.0, 0.5, 1.0}) {
      IntestReport r = verify_intest(t, c, intest_moduli(c));
      EXPECT_TRUE(r.pass) << "t=" << t << " c=" << c;
      if (c > 0.0) EXPECT_NEAR(r.fitted_exponent, -c, 0.1);
    }
  }
  EXPECT_EQ(verify_intest(0.0, -0.5, intest_moduli(-0.5)).regime, "bounded");
  EXPECT_EQ(verify_intest(0.0, 0.0, intest_moduli(0.0)).regime, "logarithmic");
  EXPECT_EQ(verify_intest(0.0, 1.0, intest_moduli(1.0)).regime, "power");
}

TEST(Intest, ValueAtOriginAndValidation) {
  // J(0) = integral of (1 - |w|^2)^t dA = 1 / (t + 1).
  EXPECT_NEAR(intest_value(0.0, 1.0, 0.0), 1.0, 1e-10);
  EXPECT_NEAR(intest_value(1.0, 0.5, 0.0), 0.5, 1e-10);
  EXPECT_THROW(verify_intest(0.0, 1.0, {0.5}), std::invalid_argument);
  EXPECT_THROW(verify_intest(0.0, 1.0, {0.5, 1.0}), std::invalid_argument);
}

TEST(Transforms, BergmanProjectionReproducesHolomorphic) {
  for (double s : {-0.4, 0.0, 1.0}) {
    Complex z(0.3, 0.4);
    // The default rule resolves the weight (1 - |w|^2)^s to about 1e-7 for negative s.
    const double tol = s < 0.0 ? 1e-6 : 1e-9;
    EXPECT_NEAR(std::abs(bergman_project([](Complex) { return Complex(1.0); }, s, z) - 1.0), 0.0, tol);
    Complex p = bergman_project([](Complex w) { return w * w; }, s, z);
    EXPECT_NEAR(std::abs(p - z * z), 0.0, tol) << "s=" << s;
  }
  // Antiholomorphic input projects to its value at 0.
  Complex q = bergman_project([](Complex w) { return std::conj(w); }, 0.0, Complex(0.5, 0.0));
  EXPECT_NEAR(std::abs(q), 0.0, 1e-9);
}

TEST(Transforms, GammaOfMonomials) {
  // Gamma_s(z^m)(z) = z^m / (m + s + 1).
  for (double s : {0.0, 1.0}) {
    for (int m : {0, 1, 2, 4}) {
      Complex z(0.5, 0.0);
      Complex v = gamma_s([m](Complex w) { return std::pow(w, m); }, s, z);
      EXPECT_NEAR(std::abs(v - std::pow(z, m) / (m + s + 1.0)), 0.0, 1e-10) << "m=" << m << " s=" << s;
    }
  }
}

TEST(Measures, SymbolMassEqualsSeminorm) {
  BergmanTree t(10, 0.0);
  Symbol b({0.0, 1.0, 0.0, 1.0});
  MeasureOnTree mu = measure_from_symbol(b, t);
  EXPECT_NEAR(mu.total(), b.dirichlet_seminorm_sq(), 1e-6);
  Rng rng(2);
  Symbol r = random_symbol(rng, 6);
  EXPECT_NEAR(measure_from_symbol(r, t).total(), r.dirichlet_seminorm_sq(), 1e-6 * r.dirichlet_seminorm_sq());
}

TEST(Measures, PointMassAndTents) {
  BergmanTree t(6, 0.0);
  NodeId x = node_at(4, 3);
  MeasureOnTree mu = MeasureOnTree::point_mass(t, x, 2.5);
  EXPECT_DOUBLE_EQ(mu.total(), 2.5);
  EXPECT_DOUBLE_EQ(mu.mass_in(TentUnion(ArcUnion({t.arc(parent_of(x))}))), 2.5);
  EXPECT_DOUBLE_EQ(mu.mass_in(TentUnion(ArcUnion({t.arc(node_at(4, 9))}))), 0.0);
}

TEST(Stegenga, RatioOfPointMass) {
  BergmanTree t(8, 0.0);
  NodeId x = node_at(3, 1);
  MeasureOnTree mu = MeasureOnTree::point_mass(t, x, 1.0);
  ArcUnion g({t.arc(x)});
  auto ratio = stegenga_ratio(mu, g);
  ASSERT_TRUE(ratio.has_value());
  // mu(T(I)) = 1 and Cap_T of a single level-3 node = 1/4.
  EXPECT_NEAR(*ratio, 4.0, 1e-12);
  EXPECT_FALSE(stegenga_ratio(mu, ArcUnion({Arc(0.1, 1e-5)})).has_value());
}

TEST(Stegenga, QuadraticInSymbolScale) {
  BergmanTree t(8, 0.0);
  Rng rng(8);
  Symbol b = random_symbol(rng, 5, true);
  ArcUnion g({Arc(1.0, 0.3)});
  auto r1 = stegenga_ratio(measure_from_symbol(b, t), g);
  auto r2 = stegenga_ratio(measure_from_symbol(b.scaled(2.0), t), g);
  ASSERT_TRUE(r1 && r2);
  EXPECT_NEAR(*r2, 4.0 * *r1, 1e-10 * *r2);
}

TEST(CapDiskUpper, FullCircleIsTrivial) {
  BergmanTree t(8, 0.0);
  CapUpperResult r = cap_disk_upper(ArcUnion::full_circle(), 0.0, t);
  EXPECT_TRUE(r.trivial);
  EXPECT_TRUE(r.calibrated);
  EXPECT_DOUBLE_EQ(r.upper, 1.0);
  EXPECT_DOUBLE_EQ(r.cap_tree, 1.0);
  EXPECT_THROW(cap_disk_upper(ArcUnion(), 0.0, t), std::invalid_argument);
  EXPECT_THROW(cap_disk_upper(ArcUnion({Arc(0.1, 1e-6)}), 0.0, t), std::domain_error);
}

TEST(CapDiskUpper, SmallSetsAreCalibratedProperty) {
  BergmanTree t(11, 0.0);
  for (std::uint64_t i = 0; i < 12; ++i) {
    Rng rng(instance_seed(70, i));
    ArcUnion g = random_arc_union(rng, 2, 0.01, 0.05);
    if (open_set_to_stopping_time(t, g).empty()) continue;
    CapUpperResult r = cap_disk_upper(g, 0.0, t);
    EXPECT_TRUE(r.calibrated);
    EXPECT_GT(r.upper, 0.0);
    EXPECT_GT(r.ratio(), 1.0);
    EXPECT_LT(r.ratio(), 100.0);
  }
}

TEST(CapDiskUpper, RotationsNeverWorsenTheBound) {
  BergmanTree t(11, 0.0);
  Rng rng(12);
  ArcUnion g = random_arc_union(rng, 2, 0.01, 0.05);
  CapUpperResult one = cap_disk_upper(g, 0.0, t);
  CapUpperResult four = cap_disk_upper_rotated(g, 0.0, t, 4);
  EXPECT_LE(four.upper, one.upper);
  EXPECT_DOUBLE_EQ(four.cap_tree, one.cap_tree);
}

TEST(CapacityBand, DeterministicForSeed) {
  BergmanTree t(10, 0.0);
  BandOptions opts;
  opts.theta_count = 1;
  opts.min_len = 0.01;
  CapacityBand a = capacity_band(t, 0.0, 6, 5, opts);
  CapacityBand b = capacity_band(t, 0.0, 6, 5, opts);
  EXPECT_EQ(a.ratios, b.ratios);
  EXPECT_EQ(a.ratios.size() + a.uncalibrated, 6u);
  EXPECT_GE(a.band(), 1.0);
}

TEST(EstimateM, PointMassPicksItsArc) {
  BergmanTree t(7, 0.0);
  MeasureOnTree mu = MeasureOnTree::point_mass(t, node_at(3, 2), 1.0);
  std::vector<ArcUnion> candidates = {ArcUnion({t.arc(node_at(3, 2))}), ArcUnion({t.arc(node_at(3, 6))})};
  MEstimate m = estimate_M(mu, candidates, 1);
  EXPECT_EQ(m.argmax, 0u);
  EXPECT_NEAR(m.m_hat, 4.0, 1e-12);
  EXPECT_EQ(m.per_candidate.size(), 2u);
}

TEST(Inpart, CollarMassOfConcentratedMeasure) {
  BergmanTree t(9, 0.0);
  Symbol b({0.0, 1.0});
  MeasureOnTree mu = measure_from_symbol(b, t);
  ArcUnion g({Arc(1.0, 0.05)});
  InpartReport wide = check_inpart(mu, g, 0.5, 1.0);
  InpartReport narrow = check_inpart(mu, g, 0.95, 1.0);
  EXPECT_GE(wide.collar_mass, narrow.collar_mass);
  EXPECT_GT(wide.core_mass, 0.0);
  EXPECT_DOUBLE_EQ(wide.core_mass, narrow.core_mass);
}
