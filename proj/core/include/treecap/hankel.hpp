#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "treecap/bergman_tree.hpp"
#include "treecap/symbol.hpp"

namespace treecap {

/// Truncated matrix of a bilinear form in the normalized monomials e_n = z^n / ||z^n||_D.
struct FormMatrix {
  enum class Kind { Tb, Kb };
  Eigen::MatrixXcd m;
  Kind kind = Kind::Tb;
  int size() const { return static_cast<int>(m.rows()); }
};

/// ||z^n||_D: 1 for n = 0, sqrt(n) otherwise.
double monomial_norm(int n);

/// T_b[i][j] = (i+j) conj(b_{i+j}) / (n_i n_j), T_b[0][0] = conj(b_0).
FormMatrix tb_matrix(const Symbol& b, int n);
/// K_b[i][j] = i conj(b_{i+j}) / (n_i n_j) for i >= 1, zero in row 0.
FormMatrix kb_matrix(const Symbol& b, int n);

/// max |T_b[i][j] - K_b[i][j] - K_b[j][i] - delta_{i0} delta_{j0} conj(b_0)|.
double verify_summ(const Symbol& b, int n);

/// max |T_b[i][j] n_i n_j - T_b[i'][j'] n_i' n_j'| over i + j = i' + j'.
double hankel_deviation(const FormMatrix& t);

/// Largest singular value by power iteration on M* M. Throws std::runtime_error past the iteration cap.
double form_norm(const FormMatrix& m, double rel_tol = 1e-10, int max_iter = 200000);

/// Number of singular values above tol * sigma_max.
int numerical_rank(const FormMatrix& m, double tol = 1e-10);

struct ArcFamilies {
  bool dyadic = true;         // every node arc of the tree
  int random_unions = 200;    // random unions of up to max_components arcs
  int max_components = 5;
  std::uint64_t seed = 42;
};

struct XNormEstimate {
  double value = 0.0;          // |b(0)| + sqrt(max ratio)
  double max_ratio = 0.0;      // max mu_b(T(G)) / Cap_T(G)
  std::size_t families = 0;    // arc sets evaluated
  bool lower_bound = true;     // the supremum runs over a finite family
};

/// |b(0)| + sqrt of the largest Stegenga ratio of mu_b over the arc families.
XNormEstimate x_norm_estimate(const Symbol& b, const BergmanTree& tree, const ArcFamilies& families = {});

struct NormRatio {
  double form_norm = 0.0;
  double x_norm = 0.0;
  double ratio = 0.0;        // form_norm / x_norm
  double d_norm = 0.0;       // ||b||_D
  double d_constant = 0.0;   // ||b||_D / form_norm
};

/// ||T_b|| (N x N truncation) against the X-norm estimate. Throws for constant b.
NormRatio norm_ratio(const Symbol& b, int n, const BergmanTree& tree, const ArcFamilies& families = {});

struct CompactnessProbe {
  std::vector<double> radii;
  std::vector<double> deviations;  // ||T_b - T_{S_r b}||
  int rank = 0;
  bool monotone = true;            // deviations nonincreasing in r
};

CompactnessProbe compactness_probe(const Symbol& b, int n, const std::vector<double>& radii);

}  // namespace treecap
