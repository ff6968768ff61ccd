#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "treecap/hankel.hpp"
#include "treecap/instances.hpp"
#include "treecap/symbol.hpp"

using namespace treecap;

namespace {

// Integer coefficients keep (i + j) conj(b) exact; only the normalization by sqrt(i) sqrt(j) rounds.
Symbol integer_symbol(Rng& rng, int degree) {
  std::vector<Complex> c(degree + 1);
  for (auto& x : c) x = Complex(static_cast<double>(rng.between(-9, 9)), static_cast<double>(rng.between(-9, 9)));
  if (c.back() == Complex(0.0)) c.back() = 1.0;
  return Symbol(c);
}

double svd_norm(const FormMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.m);
  return svd.singularValues()(0);
}

}  // namespace

TEST(Symbol, DirichletInnerExamples) {
  Symbol z = Symbol::monomial(1);
  Symbol z2 = Symbol::monomial(2);
  EXPECT_DOUBLE_EQ(dirichlet_inner(z, z).real(), 1.0);
  EXPECT_DOUBLE_EQ(dirichlet_inner(z2, z2).real(), 2.0);
  EXPECT_DOUBLE_EQ(std::abs(dirichlet_inner(Symbol({1.0, 1.0}), Symbol({1.0, -1.0}))), 0.0);
  EXPECT_DOUBLE_EQ(Symbol({3.0, 0.0, 2.0}).dirichlet_norm_sq(), 9.0 + 8.0);
}

TEST(FormMatrix, SmallExamples) {
  FormMatrix one = tb_matrix(Symbol({1.0}), 4);
  EXPECT_EQ(one.m(0, 0), Complex(1.0));
  EXPECT_DOUBLE_EQ(one.m.cwiseAbs().sum(), 1.0);
  FormMatrix z = tb_matrix(Symbol::monomial(1), 2);
  EXPECT_EQ(z.m(0, 1), Complex(1.0));
  EXPECT_EQ(z.m(1, 0), Complex(1.0));
  EXPECT_EQ(z.m(1, 1), Complex(0.0));
  EXPECT_THROW(tb_matrix(Symbol::monomial(1), 0), std::invalid_argument);
  EXPECT_EQ(monomial_norm(0), 1.0);
  EXPECT_DOUBLE_EQ(monomial_norm(4), 2.0);
}

TEST(FormMatrix, ConjugatesCoefficients) {
  FormMatrix t = tb_matrix(Symbol({0.0, Complex(0.0, 2.0)}), 2);
  EXPECT_EQ(t.m(0, 1), Complex(0.0, -2.0));
}

TEST(Summ, ExactForIntegerSymbolsProperty) {
  Rng rng(101);
  for (int i = 0; i < 40; ++i) {
    Symbol b = integer_symbol(rng, rng.between(0, 20));
    double scale = 0.0;
    for (const Complex& c : b.coefficients()) scale = std::max(scale, std::abs(c));
    EXPECT_LE(verify_summ(b, b.degree() + 3), 4.0 * std::numeric_limits<double>::epsilon() * scale);
  }
  EXPECT_EQ(verify_summ(Symbol::monomial(3), 8), 0.0);
  EXPECT_EQ(verify_summ(Symbol({Complex(2.0, 1.0)}), 3), 0.0);
}

TEST(Summ, FloatingPointBoundProperty) {
  Rng rng(102);
  for (int i = 0; i < 50; ++i) {
    int d = rng.between(0, 20);
    Symbol b = random_symbol(rng, d);
    EXPECT_LE(verify_summ(b, std::max(4 * d, d + 1)), 1e-14);
  }
}

TEST(Hankel, AntidiagonalStructureProperty) {
  Rng rng(103);
  for (int i = 0; i < 30; ++i) {
    Symbol b = integer_symbol(rng, rng.between(1, 15));
    EXPECT_LE(hankel_deviation(tb_matrix(b, b.degree() + 4)), 1e-12);
  }
}

TEST(FormNorm, Examples) {
  FormMatrix swap;
  swap.m = Eigen::MatrixXcd::Zero(2, 2);
  swap.m(0, 1) = swap.m(1, 0) = 1.0;
  EXPECT_NEAR(form_norm(swap), 1.0, 1e-10);
  FormMatrix diag;
  diag.m = Eigen::MatrixXcd::Zero(5, 5);
  diag.m(2, 2) = 3.0;
  EXPECT_NEAR(form_norm(diag), 3.0, 1e-10);
  EXPECT_NEAR(form_norm(tb_matrix(Symbol::monomial(1), 8)), 1.0, 1e-10);
}

TEST(FormNorm, MatchesSvdProperty) {
  Rng rng(104);
  for (int i = 0; i < 20; ++i) {
    int d = rng.between(1, 12);
    FormMatrix t = tb_matrix(random_symbol(rng, d), 2 * d + 2);
    EXPECT_NEAR(form_norm(t), svd_norm(t), 1e-8 * svd_norm(t));
  }
}

TEST(FormNorm, TruncationMonotoneAndStableProperty) {
  Rng rng(105);
  for (int i = 0; i < 10; ++i) {
    int d = rng.between(1, 10);
    Symbol b = random_symbol(rng, d);
    double prev = 0.0;
    for (int n = 1; n <= d + 1; ++n) {
      double v = form_norm(tb_matrix(b, n));
      EXPECT_GE(v, prev - 1e-9 * v);
      prev = v;
    }
    EXPECT_NEAR(form_norm(tb_matrix(b, 3 * d + 5)), prev, 1e-8 * prev);
  }
}

TEST(Rank, MonomialRank) {
  EXPECT_EQ(numerical_rank(tb_matrix(Symbol::monomial(5), 12)), 6);
  Rng rng(106);
  for (int i = 0; i < 10; ++i) {
    int d = rng.between(1, 10);
    EXPECT_LE(numerical_rank(tb_matrix(random_symbol(rng, d), 3 * d)), d + 1);
  }
}

TEST(XNorm, ConstantSymbolAndScaling) {
  BergmanTree t(6, 0.0);
  ArcFamilies fam;
  fam.random_unions = 20;
  EXPECT_NEAR(x_norm_estimate(Symbol({Complex(0.0, 3.0)}), t, fam).value, 3.0, 1e-12);
  Rng rng(107);
  Symbol b = random_symbol(rng, 5, true);
  double one = x_norm_estimate(b, t, fam).value;
  double two = x_norm_estimate(b.scaled(2.0), t, fam).value;
  EXPECT_NEAR(two, 2.0 * one, 1e-9 * two);
}

TEST(XNorm, MonotoneInFamilies) {
  BergmanTree t(6, 0.0);
  Rng rng(108);
  Symbol b = random_symbol(rng, 4);
  ArcFamilies dyadic_only;
  dyadic_only.random_unions = 0;
  ArcFamilies more;
  more.random_unions = 50;
  XNormEstimate a = x_norm_estimate(b, t, dyadic_only);
  XNormEstimate c = x_norm_estimate(b, t, more);
  EXPECT_GE(c.value, a.value);
  EXPECT_GT(c.families, a.families);
  EXPECT_TRUE(c.lower_bound);
}

TEST(NormRatio, InvariancesAndDnorm) {
  BergmanTree t(6, 0.0);
  ArcFamilies fam;
  fam.random_unions = 20;
  Rng rng(109);
  Symbol b = random_symbol(rng, 6, true);
  NormRatio r = norm_ratio(b, 24, t, fam);
  NormRatio scaled = norm_ratio(b.scaled(3.0), 24, t, fam);
  NormRatio phased = norm_ratio(b.scaled(std::polar(1.0, 0.7)), 24, t, fam);
  EXPECT_NEAR(scaled.ratio, r.ratio, 1e-9 * r.ratio);
  EXPECT_NEAR(phased.ratio, r.ratio, 1e-9 * r.ratio);
  EXPECT_LE(r.d_constant, 1.0 + 1e-12);
  EXPECT_THROW(norm_ratio(Symbol({1.0}), 4, t, fam), std::invalid_argument);
  EXPECT_THROW(norm_ratio(b, 3, t, fam), std::invalid_argument);
}

TEST(Compactness, DeviationsShrinkToZero) {
  Rng rng(110);
  Symbol b = random_symbol(rng, 6);
  CompactnessProbe p = compactness_probe(b, 24, {0.5, 0.9, 0.99, 1.0});
  EXPECT_TRUE(p.monotone);
  EXPECT_EQ(p.deviations.back(), 0.0);
  EXPECT_LT(p.deviations[2], 0.1 * p.deviations[0]);
  EXPECT_LE(p.rank, 7);
}
