#include "treecap/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "treecap/disk_numerics.hpp"
#include "treecap/instances.hpp"

namespace treecap {

double monomial_norm(int n) { return n == 0 ? 1.0 : std::sqrt(static_cast<double>(n)); }

namespace {

void check_size(int n) {
  if (n <= 0) throw std::invalid_argument("form matrix size must be positive");
}

}  // namespace

FormMatrix tb_matrix(const Symbol& b, int n) {
  check_size(n);
  FormMatrix out{Eigen::MatrixXcd::Zero(n, n), FormMatrix::Kind::Tb};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = i + j;
      Complex c = std::conj(b.coefficient(k));
      if (k == 0) {
        out.m(i, j) = c;
      } else if (c != Complex(0.0)) {
        out.m(i, j) = static_cast<double>(k) * c / (monomial_norm(i) * monomial_norm(j));
      }
    }
  }
  return out;
}

FormMatrix kb_matrix(const Symbol& b, int n) {
  check_size(n);
  FormMatrix out{Eigen::MatrixXcd::Zero(n, n), FormMatrix::Kind::Kb};
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex c = std::conj(b.coefficient(i + j));
      if (c != Complex(0.0)) out.m(i, j) = static_cast<double>(i) * c / (monomial_norm(i) * monomial_norm(j));
    }
  }
  return out;
}

double verify_summ(const Symbol& b, int n) {
  FormMatrix t = tb_matrix(b, n);
  FormMatrix k = kb_matrix(b, n);
  Eigen::MatrixXcd diff = t.m - k.m - k.m.transpose();
  diff(0, 0) -= std::conj(b.coefficient(0));
  return diff.cwiseAbs().maxCoeff();
}

double hankel_deviation(const FormMatrix& t) {
  const int n = t.size();
  double worst = 0.0;
  for (int k = 0; k <= 2 * (n - 1); ++k) {
    const int i0 = std::max(0, k - (n - 1));
    Complex ref = t.m(i0, k - i0) * monomial_norm(i0) * monomial_norm(k - i0);
    for (int i = i0 + 1; i <= std::min(k, n - 1); ++i) {
      Complex v = t.m(i, k - i) * monomial_norm(i) * monomial_norm(k - i);
      worst = std::max(worst, std::abs(v - ref));
    }
  }
  return worst;
}

double form_norm(const FormMatrix& fm, double rel_tol, int max_iter) {
  const Eigen::MatrixXcd& m = fm.m;
  if (!m.allFinite()) throw std::invalid_argument("form_norm: non-finite entries");
  const Eigen::Index n = m.cols();
  if (n == 0 || m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  // Deterministic start with no special alignment to any monomial.
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(1.0 + 0.1 * std::sin(1.7 * i), 0.05 * std::cos(2.3 * i));
  v.normalize();
  const Eigen::MatrixXcd g = m.adjoint() * m;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd w = g * v;
    double lambda = std::real(v.dot(w));
    double residual = (w - lambda * v).norm();
    if (lambda > 0.0 && residual <= rel_tol * lambda) return std::sqrt(lambda);
    double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  throw std::runtime_error("form_norm: power iteration did not converge");
}

int numerical_rank(const FormMatrix& fm, double tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(fm.m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

XNormEstimate x_norm_estimate(const Symbol& b, const BergmanTree& tree, const ArcFamilies& families) {
  XNormEstimate out;
  const double b0 = std::abs(b.coefficient(0));
  if (b.is_constant()) {
    out.value = b0;
    return out;
  }
  MeasureOnTree mu = measure_from_symbol(b, tree);
  auto consider = [&](const ArcUnion& g) {
    std::optional<double> r = stegenga_ratio(mu, g);
    if (!r) return;
    ++out.families;
    out.max_ratio = std::max(out.max_ratio, *r);
  };
  if (families.dyadic) {
    for (std::uint32_t i = 0; i < tree.node_count(); ++i) consider(ArcUnion({tree.arc(NodeId(i))}));
  }
  Rng rng(families.seed);
  for (int k = 0; k < families.random_unions; ++k) {
    consider(random_arc_union(rng, families.max_components, 0.01, 2.0));
  }
  out.value = b0 + std::sqrt(out.max_ratio);
  return out;
}

NormRatio norm_ratio(const Symbol& b, int n, const BergmanTree& tree, const ArcFamilies& families) {
  if (b.is_constant()) throw std::invalid_argument("norm_ratio: constant symbol");
  if (n < b.degree() + 1) throw std::invalid_argument("norm_ratio: truncation below degree + 1");
  NormRatio out;
  out.form_norm = form_norm(tb_matrix(b, n));
  out.x_norm = x_norm_estimate(b, tree, families).value;
  if (!(out.x_norm > 0.0)) throw std::domain_error("norm_ratio: zero X-norm estimate");
  out.ratio = out.form_norm / out.x_norm;
  out.d_norm = std::sqrt(b.dirichlet_norm_sq());
  out.d_constant = out.d_norm / out.form_norm;
  return out;
}

CompactnessProbe compactness_probe(const Symbol& b, int n, const std::vector<double>& radii) {
  CompactnessProbe out;
  FormMatrix t = tb_matrix(b, n);
  out.rank = numerical_rank(t);
  for (double r : radii) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("compactness_probe: radii must lie in (0, 1]");
    FormMatrix d = tb_matrix(b.dilated(r), n);
    d.m = t.m - d.m;
    out.radii.push_back(r);
    out.deviations.push_back(form_norm(d));
  }
  std::vector<std::size_t> order(out.radii.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return out.radii[a] < out.radii[c]; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (out.deviations[order[i]] > out.deviations[order[i - 1]] * (1.0 + 1e-9) + 1e-15) out.monotone = false;
  }
  return out;
}

}  // namespace treecap
