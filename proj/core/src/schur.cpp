#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "treecap/extremal_fields.hpp"
#include "treecap/random.hpp"

namespace treecap {

namespace {

double lp_norm(const std::vector<double>& f, const std::vector<double>& w, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * std::pow(std::abs(f[i]), p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> apply(const SchurProblem& pr, const std::vector<double>& f, const std::vector<double>& g) {
  std::vector<double> out(pr.mu.size(), 0.0);
  for (std::size_t x = 0; x < pr.mu.size(); ++x) {
    double acc = 0.0;
    for (std::size_t y = 0; y < pr.nu.size(); ++y) {
      for (std::size_t z = 0; z < pr.omega.size(); ++z) acc += pr.kernel(x, y, z) * f[y] * g[z] * pr.nu[y] * pr.omega[z];
    }
    out[x] = acc;
  }
  return out;
}

double ratio_of(const SchurProblem& pr, const std::vector<double>& f, const std::vector<double>& g) {
  double den = lp_norm(f, pr.nu, pr.p) * lp_norm(g, pr.omega, pr.p);
  if (den == 0.0) return 0.0;
  return lp_norm(apply(pr, f, g), pr.mu, pr.p) / den;
}

// Best f for fixed g when p = 2: top singular vector of f -> T(f, g) between weighted l^2 spaces.
std::vector<double> best_first(const SchurProblem& pr, const std::vector<double>& g) {
  const auto nx = static_cast<Eigen::Index>(pr.mu.size());
  const auto ny = static_cast<Eigen::Index>(pr.nu.size());
  Eigen::MatrixXd m(nx, ny);
  for (Eigen::Index x = 0; x < nx; ++x) {
    for (Eigen::Index y = 0; y < ny; ++y) {
      double acc = 0.0;
      for (std::size_t z = 0; z < pr.omega.size(); ++z) acc += pr.kernel(x, y, z) * g[z] * pr.omega[z];
      m(x, y) = std::sqrt(pr.mu[x]) * acc * std::sqrt(pr.nu[y]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m);
  Eigen::VectorXd v = es.eigenvectors().col(ny - 1).cwiseAbs();
  std::vector<double> f(ny);
  for (Eigen::Index y = 0; y < ny; ++y) f[y] = v(y) / std::sqrt(pr.nu[y]);
  return f;
}

SchurProblem swapped(const SchurProblem& pr) {
  SchurProblem q = pr;
  std::swap(q.nu, q.omega);
  std::swap(q.k, q.m);
  auto kern = pr.kernel;
  q.kernel = [kern](std::size_t x, std::size_t y, std::size_t z) { return kern(x, z, y); };
  return q;
}

}  // namespace

SchurResult schur_bilinear_check(const SchurProblem& pr, int trials, std::uint64_t seed) {
  if (!(pr.p > 1.0)) throw std::invalid_argument("schur_bilinear_check: p must exceed 1");
  if (pr.h.size() != pr.mu.size() || pr.k.size() != pr.nu.size() || pr.m.size() != pr.omega.size()) {
    throw std::invalid_argument("schur_bilinear_check: Schur weights do not match the spaces");
  }
  if (!pr.kernel) throw std::invalid_argument("schur_bilinear_check: missing kernel");
  for (const auto* v : {&pr.h, &pr.k, &pr.m}) {
    for (double w : *v) {
      if (!(w > 0.0)) throw std::invalid_argument("schur_bilinear_check: Schur weights must be positive");
    }
  }
  const double p = pr.p;
  const double q = p / (p - 1.0);
  SchurResult res;
  for (std::size_t x = 0; x < pr.mu.size(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < pr.nu.size(); ++y) {
      for (std::size_t z = 0; z < pr.omega.size(); ++z) {
        s += pr.kernel(x, y, z) * std::pow(pr.k[y] * pr.m[z], q) * pr.nu[y] * pr.omega[z];
      }
    }
    if (!std::isfinite(s)) throw std::domain_error("schur_bilinear_check: divergent first Schur integral");
    res.a_hat = std::max(res.a_hat, std::pow(s, 1.0 / q) / pr.h[x]);
  }
  for (std::size_t y = 0; y < pr.nu.size(); ++y) {
    for (std::size_t z = 0; z < pr.omega.size(); ++z) {
      double s = 0.0;
      for (std::size_t x = 0; x < pr.mu.size(); ++x) s += pr.kernel(x, y, z) * std::pow(pr.h[x], p) * pr.mu[x];
      if (!std::isfinite(s)) throw std::domain_error("schur_bilinear_check: divergent second Schur integral");
      res.b_hat = std::max(res.b_hat, std::pow(s, 1.0 / p) / (pr.k[y] * pr.m[z]));
    }
  }
  Rng rng(seed);
  std::vector<double> f(pr.nu.size()), g(pr.omega.size());
  for (int t = 0; t < trials; ++t) {
    for (double& v : f) v = rng.uniform();
    for (double& v : g) v = rng.uniform();
    res.direct = std::max(res.direct, ratio_of(pr, f, g));
  }
  if (p == 2.0 && !pr.nu.empty() && !pr.omega.empty()) {
    SchurProblem sw = swapped(pr);
    std::fill(g.begin(), g.end(), 1.0);
    for (int it = 0; it < 20; ++it) {
      f = best_first(pr, g);
      g = best_first(sw, f);
      res.direct = std::max(res.direct, ratio_of(pr, f, g));
    }
  }
  return res;
}

double SeparatedPair::separation(const std::vector<Complex>& a, const std::vector<Complex>& b, double alpha) {
  double best = std::numeric_limits<double>::infinity();
  for (Complex k : a) {
    for (Complex g : b) best = std::min(best, std::abs(k - g) / std::pow(1.0 - std::norm(g), alpha));
  }
  return best;
}

SeparatedPair::SeparatedPair(const BergmanTree& tree, std::vector<NodeId> a, std::vector<NodeId> b, double alpha)
    : a_(std::move(a)), b_(std::move(b)), alpha_(alpha) {
  if (!(alpha > 0.5 && alpha < 1.0)) throw std::invalid_argument("SeparatedPair: alpha must lie in (1/2, 1)");
  if (a_.empty() || b_.empty()) throw std::invalid_argument("SeparatedPair: both node sets must be nonempty");
  for (NodeId x : a_) a_pts_.push_back(tree.index_point(x));
  for (NodeId x : b_) b_pts_.push_back(tree.index_point(x));
  if (separation(a_pts_, b_pts_, alpha_) < 1.0) throw std::invalid_argument("SeparatedPair: separation condition fails");
}

namespace {

struct BilinKernels {
  Eigen::MatrixXd a;  // rule node x atom of A
  Eigen::MatrixXd b;  // rule node x atom of B
  Eigen::VectorXd w;  // rule weights
};

BilinKernels bilin_kernels(const std::vector<Complex>& a, const std::vector<Complex>& b, double s,
                           const QuadratureRule& rule) {
  const auto n = static_cast<Eigen::Index>(rule.size());
  BilinKernels k{Eigen::MatrixXd(n, static_cast<Eigen::Index>(a.size())),
                 Eigen::MatrixXd(n, static_cast<Eigen::Index>(b.size())), Eigen::VectorXd(n)};
  for (Eigen::Index x = 0; x < n; ++x) {
    Complex z = rule.nodes()[x];
    k.w(x) = rule.weights()[x];
    for (std::size_t i = 0; i < a.size(); ++i) {
      k.a(x, i) = std::pow(1.0 - std::norm(a[i]), 1.0 + s) / std::pow(std::abs(1.0 - std::conj(a[i]) * z), 2.0 + s);
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      k.b(x, i) = std::pow(1.0 - std::norm(b[i]), 1.0 + s) / std::pow(std::abs(1.0 - std::conj(b[i]) * z), 1.0 + s);
    }
  }
  return k;
}

// Top eigenpair of F^T diag(q) F with a nonnegative eigenvector.
std::pair<double, Eigen::VectorXd> top_pair(const Eigen::MatrixXd& f, const Eigen::VectorXd& q) {
  Eigen::MatrixXd m = f.transpose() * q.asDiagonal() * f;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const Eigen::Index last = m.rows() - 1;
  return {std::max(0.0, es.eigenvalues()(last)), es.eigenvectors().col(last).cwiseAbs()};
}

}  // namespace

double bilin_epsilon(double alpha, double s) { return std::min(0.1, (1.0 - alpha) * (1.0 + s) / 2.0); }

SchurProblem bilinear_schur_problem(const std::vector<Complex>& a, const std::vector<Complex>& b, double s,
                                    double eps, const QuadratureRule& rule) {
  auto k = std::make_shared<BilinKernels>(bilin_kernels(a, b, s, rule));
  SchurProblem pr;
  pr.p = 2.0;
  pr.mu = rule.weights();
  pr.nu.assign(a.size(), 1.0);
  pr.omega.assign(b.size(), 1.0);
  pr.kernel = [k](std::size_t x, std::size_t y, std::size_t z) {
    return k->a(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) *
           k->b(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(z));
  };
  for (Complex z : rule.nodes()) pr.h.push_back(std::pow(1.0 - std::norm(z), -0.25));
  for (Complex z : a) pr.k.push_back(std::pow(1.0 - std::norm(z), 0.25));
  for (Complex z : b) pr.m.push_back(std::pow(1.0 - std::norm(z), 0.5 * eps));
  return pr;
}

BilinResult verify_bilin(const std::vector<Complex>& a, const std::vector<Complex>& b, double s, int trials,
                         std::uint64_t seed, const QuadratureRule& rule, double alpha) {
  if (!(s > -1.0)) throw std::invalid_argument("verify_bilin: s must exceed -1");
  if (a.empty() || b.empty()) throw std::invalid_argument("verify_bilin: empty node set");
  BilinKernels k = bilin_kernels(a, b, s, rule);
  BilinResult res;

  // Schur integrals with h = (1-|z|^2)^-1/4, k = (1-|kappa|^2)^1/4, m = (1-|gamma|^2)^(eps/2).
  const double eps = bilin_epsilon(alpha, s);
  Eigen::VectorXd kw(static_cast<Eigen::Index>(a.size())), mw(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) kw(i) = std::pow(1.0 - std::norm(a[i]), 0.25);
  for (std::size_t i = 0; i < b.size(); ++i) mw(i) = std::pow(1.0 - std::norm(b[i]), 0.5 * eps);
  Eigen::VectorXd hsq(k.w.size());
  for (Eigen::Index x = 0; x < k.w.size(); ++x) hsq(x) = std::pow(1.0 - std::norm(rule.nodes()[x]), -0.5);
  Eigen::VectorXd sa = k.a * kw.cwiseAbs2();
  Eigen::VectorXd sb = k.b * mw.cwiseAbs2();
  for (Eigen::Index x = 0; x < k.w.size(); ++x) res.a_hat = std::max(res.a_hat, std::sqrt(sa(x) * sb(x) / hsq(x)));
  Eigen::MatrixXd second = k.a.transpose() * (k.w.cwiseProduct(hsq)).asDiagonal() * k.b;
  for (Eigen::Index i = 0; i < second.rows(); ++i) {
    for (Eigen::Index j = 0; j < second.cols(); ++j) {
      res.b_hat = std::max(res.b_hat, std::sqrt(second(i, j)) / (kw(i) * mw(j)));
    }
  }

  auto ratio = [&](const Eigen::VectorXd& hv, const Eigen::VectorXd& bv) {
    Eigen::VectorXd prod = (k.a * hv).cwiseProduct(k.b * bv);
    return std::sqrt(k.w.dot(prod.cwiseAbs2())) / (hv.norm() * bv.norm());
  };
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd hv(kw.size()), bv(mw.size());
    for (Eigen::Index i = 0; i < hv.size(); ++i) hv(i) = rng.normal();
    for (Eigen::Index i = 0; i < bv.size(); ++i) bv(i) = rng.normal();
    res.norm_ratio = std::max(res.norm_ratio, ratio(hv, bv));
  }
  Eigen::VectorXd bv = Eigen::VectorXd::Ones(mw.size());
  Eigen::VectorXd hv = Eigen::VectorXd::Ones(kw.size());
  double prev = 0.0;
  for (int it = 0; it < 50; ++it) {
    hv = top_pair(k.a, k.w.cwiseProduct((k.b * bv).cwiseAbs2())).second;
    auto [lam, v] = top_pair(k.b, k.w.cwiseProduct((k.a * hv).cwiseAbs2()));
    bv = v;
    double r = std::sqrt(lam) / (hv.norm() * bv.norm());
    res.norm_ratio = std::max(res.norm_ratio, r);
    if (std::abs(r - prev) <= 1e-12 * r) break;
    prev = r;
  }
  return res;
}

BilinResult verify_bilin(const SeparatedPair& pair, double s, int trials, std::uint64_t seed) {
  double r_max = 0.0;
  for (Complex z : pair.a_points()) r_max = std::max(r_max, std::abs(z));
  for (Complex z : pair.b_points()) r_max = std::max(r_max, std::abs(z));
  int depth = static_cast<int>(std::ceil(-std::log2(std::max(1e-12, 1.0 - r_max))));
  int n_t = std::clamp(16 << std::min(depth, 8), 256, 4096);
  QuadratureRule rule = QuadratureRule::graded(depth + 6, 6, n_t);
  return verify_bilin(pair.a_points(), pair.b_points(), s, trials, seed, rule, pair.alpha());
}

}  // namespace treecap
