#pragma once

#include <functional>
#include <map>
#include <vector>

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"
#include "treecap/quadrature.hpp"
#include "treecap/symbol.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

struct Atom {
  NodeId node;
  Complex point;  // index point of the node
  double weight;  // h(node)
};

/// Atoms of an extremal solution: nodes with h > 0.
std::vector<Atom> atoms_of(const BergmanTree& tree, const ExtremalSolution& sol);

/// Phi(z) = sum h(k) ((1 - |k|^2) / (1 - conj(k) z))^(1+s).
class PhiField {
 public:
  PhiField(std::vector<Atom> atoms, double s);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double s() const { return s_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  /// ||Phi - Phi(0)||_D^2 = sum_{n >= 1} n |Phi_n|^2 from the Taylor series.
  double dirichlet_seminorm_sq(double rel_tol = 1e-12) const;

 private:
  std::vector<Atom> atoms_;
  double s_;
  std::vector<double> scale_;  // h(k) (1 - |k|^2)^(1+s)
};

/// g(w) = sum h(k) |B_k|^-1 (1 - conj(w) k)^(1+s) (1 - |w|^2)^-s on the balls B_k = B(k, c (1 - |k|)).
class GField {
 public:
  GField(std::vector<Atom> atoms, double s, double c);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double s() const { return s_; }
  double c() const { return c_; }
  double radius(std::size_t i) const { return c_ * (1.0 - std::abs(atoms_[i].point)); }

  Complex operator()(Complex w) const;

  /// Per-atom factors |B_k|^-2 integral over B_k of |1 - conj(w) k|^(2+2s) (1 - |w|^2)^-2s dA.
  const std::vector<double>& box_factors() const { return factors_; }

  /// Integral of |g|^2 assembled atom by atom: sum h^2 * factor.
  double norm_sq() const;

  /// Tensor rule on the ball of atom i.
  QuadratureRule ball_rule(std::size_t i, int n_r = 12, int n_t = 24) const;

 private:
  std::vector<Atom> atoms_;
  double s_;
  double c_;
  std::vector<double> factors_;
};

PhiField build_phi(const BergmanTree& tree, const ExtremalSolution& sol, double s);
GField build_g(const BergmanTree& tree, const ExtremalSolution& sol, double s, double c = 0.125);

/// Gamma_s g evaluated by per-ball quadrature (equals Phi up to quadrature error).
Complex gamma_of_g(const GField& g, Complex z);

struct PhiEstimateReport {
  double cap = 0.0;
  double min_re_target = 0.0;      // min_k Re Phi(w_k)
  double max_abs_target = 0.0;     // max_k |Phi(w_k)|
  double max_oscillation = 0.0;    // max |Phi(z) - Phi(w_k)| / Cap, z in T(w_k)
  double max_off_source = 0.0;     // max |Phi(z)| / Cap, z outside the tent region of the sources
  std::size_t tent_samples = 0;
  std::size_t off_samples = 0;
};

/// Sample the four lines of the estimates for a condenser extremal whose targets are the w_k.
PhiEstimateReport check_phi_estimates(const BergmanTree& tree, const ExtremalSolution& sol, double s,
                                      int samples_per_target, int off_samples, std::uint64_t seed);

struct PhiBatch {
  std::vector<PhiEstimateReport> reports;  // in instance order
  std::size_t redraws = 0;                 // condensers discarded because F met E
};

/// Condensers E = a few clustered deep nodes, F = the capacitary blowup of E at height 1/2, and the
/// estimates for Phi of Cap(E, F). Instance i draws from instance_seed(seed, i).
PhiBatch phi_estimate_batch(int max_level, double s, std::size_t instances, std::uint64_t seed,
                            bool parallel = false);

// ---- Omega_j layers ----

struct OmegaLayer {
  int j = 0;
  std::vector<NodeId> odd;   // odd distance from the root
  std::vector<NodeId> even;
  std::size_t violations = 0;  // members with a proper ancestor in the same parity part
  double h_sum = 0.0;
};

struct OmegaDecomposition {
  std::map<int, OmegaLayer> layers;
  std::size_t violations() const;
  double max_h_sum() const;
};

/// Layers A^(-j-1) < |(1 - |k|^2) / (1 - conj(k) z)| <= A^-j, split by depth parity.
/// `h` may be empty; otherwise it supplies the weights summed per layer.
OmegaDecomposition omega_decomposition(const BergmanTree& tree, Complex z, const std::vector<NodeId>& atoms,
                                       double a_const, const TreeFunction* h = nullptr);

// ---- Schur machinery ----

/// Finite measure spaces X, Y, Z with a nonnegative kernel and Schur test functions.
struct SchurProblem {
  std::vector<double> mu;     // weights on X
  std::vector<double> nu;     // weights on Y
  std::vector<double> omega;  // weights on Z
  std::function<double(std::size_t, std::size_t, std::size_t)> kernel;
  std::vector<double> h;  // on X
  std::vector<double> k;  // on Y
  std::vector<double> m;  // on Z
  double p = 2.0;
};

struct SchurResult {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double direct = 0.0;  // best sampled ||T(f,g)|| / (||f|| ||g||)
  bool sound() const { return direct <= a_hat * b_hat * 1.05; }
};

/// Evaluate both Schur integrals and sample the bilinear norm directly.
SchurResult schur_bilinear_check(const SchurProblem& problem, int trials, std::uint64_t seed);

/// Node sets A, B with |k - g| >= (1 - |g|^2)^alpha for all k in A, g in B.
class SeparatedPair {
 public:
  SeparatedPair(const BergmanTree& tree, std::vector<NodeId> a, std::vector<NodeId> b, double alpha);

  const std::vector<Complex>& a_points() const { return a_pts_; }
  const std::vector<Complex>& b_points() const { return b_pts_; }
  const std::vector<NodeId>& a() const { return a_; }
  const std::vector<NodeId>& b() const { return b_; }
  double alpha() const { return alpha_; }

  /// Smallest |k - g| / (1 - |g|^2)^alpha over the pair.
  static double separation(const std::vector<Complex>& a, const std::vector<Complex>& b, double alpha);

 private:
  std::vector<NodeId> a_;
  std::vector<NodeId> b_;
  std::vector<Complex> a_pts_;
  std::vector<Complex> b_pts_;
  double alpha_;
};

/// Schur problem of the bilinear lemma on a quadrature rule: X = rule nodes, Y = A, Z = B.
SchurProblem bilinear_schur_problem(const std::vector<Complex>& a, const std::vector<Complex>& b, double s,
                                    double eps, const QuadratureRule& rule);

struct BilinResult {
  double norm_ratio = 0.0;
  double a_hat = 0.0;
  double b_hat = 0.0;
};

/// Largest ||T(h, b)||_{L^2} / (||h|| ||b||) found by alternating eigen-maximization plus random trials.
BilinResult verify_bilin(const SeparatedPair& pair, double s, int trials, std::uint64_t seed);
BilinResult verify_bilin(const std::vector<Complex>& a, const std::vector<Complex>& b, double s, int trials,
                         std::uint64_t seed, const QuadratureRule& rule, double alpha);

/// Default epsilon of the Schur weights: min(0.1, (1 - alpha)(1 + s) / 2).
double bilin_epsilon(double alpha, double s);

// ---- the operator S(f)(z) = (1-|z|^2)^a integral f(w) (1-|w|^2)^b / |1 - conj(w) z|^(2+a+b) dA(w) ----

struct Trend {
  std::vector<int> levels;
  std::vector<double> norms;
  bool bounded = false;
  double last_growth = 0.0;      // norms[n-1] / norms[n-2]
  double increment_ratio = 0.0;  // (norms[n-1] - norms[n-2]) / (norms[n-2] - norms[n-3])
};

/// Discretized operator norm of S on L^p((1-|z|^2)^t dA) over Bergman boxes up to each level.
/// The trend counts as bounded when successive increments shrink (increment ratio below 0.985);
/// logarithmic and power growth both keep the ratio near or above 1.
Trend verify_210(double a, double b_exp, double t, double p, const std::vector<int>& levels);

/// -pa < t + 1 < p (b + 1).
bool param_condition(double a, double b_exp, double t, double p);

// ---- localized symbol ----

/// f and Lambda b' for a region V: with c(w) = b'(w) (1 - |w|^2)^s,
///   f(z)        = sum_{w in V}  c(w) (1 - conj(w) z)^-(1+s) / conj(w)
///   Lambda b'(z) = -(s+1) sum_{w not in V} c(w) (1 - conj(w) z)^-(2+s),
/// both as quadrature sums over one rule, so f' = b' + Lambda b' wherever the rule reproduces b'.
class LocalizedSymbol {
 public:
  LocalizedSymbol(const std::function<Complex(Complex)>& b_prime, const std::function<bool(Complex)>& in_region,
                  double s, const QuadratureRule& rule);

  Complex f(Complex z) const;
  Complex f_prime(Complex z) const;
  Complex f_prime_fd(Complex z, double h = 1e-5) const;
  Complex lambda(Complex z) const;
  double s() const { return s_; }
  std::size_t inside_count() const { return in_.size(); }

 private:
  struct Source {
    Complex conj_w;
    Complex c;
  };
  std::vector<Source> in_;
  std::vector<Source> out_;
  double s_;
};

/// The same f and Lambda b' for a region given as a union of polar rectangles {r >= r_inner, theta in arc}
/// (a tree tent), from exact Taylor coefficients. b' is polynomial, so every moment of b' (1-|w|^2)^s over a
/// rectangle is a radial recurrence times an angular exponential; Lambda b' = P_s(chi_V b') - b'.
class SeriesLocalizedSymbol {
 public:
  SeriesLocalizedSymbol(const Symbol& b, std::vector<Box> rects, double s, int n_terms = 1 << 15);

  bool contains(Complex z) const;
  Complex f(Complex z) const;
  Complex f_prime(Complex z) const;
  Complex lambda(Complex z) const { return f_prime(z) - b_.derivative(z); }
  double s() const { return s_; }

 private:
  int terms_for(Complex z) const;

  Symbol b_;
  std::vector<Box> rects_;
  double s_;
  std::vector<Complex> f_coeffs_;   // Taylor coefficients of f
  std::vector<Complex> fp_coeffs_;  // Taylor coefficients of f'
};

/// Polar rectangles of the tree tent below a stopping time.
std::vector<Box> tent_rectangles(const BergmanTree& tree, const StoppingTime& w);

}  // namespace treecap
