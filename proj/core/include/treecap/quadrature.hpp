#pragma once

#include <functional>
#include <vector>

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"

namespace treecap {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int n);

/// Node set with weights for the normalized area measure dA = r dr dtheta / pi.
class QuadratureRule {
 public:
  QuadratureRule() = default;

  /// Tensor rule: n_r Gauss-Legendre radii on [0, 1], n_t equispaced angles.
  static QuadratureRule polar(int n_r, int n_t);

  /// Radial panels [0, 1/2], [1/2, 3/4], ..., [1 - 2^-levels, 1], each with `per_panel` nodes.
  static QuadratureRule graded(int levels, int per_panel, int n_t);

  /// Rule refined geometrically toward z, in radius and in angle, for kernels peaked near z.
  static QuadratureRule focused(Complex z, int per_panel);

  /// Tensor Gauss-Legendre rule on one polar box.
  static QuadratureRule on_box(const Box& box, int n);

  /// Same rule restricted to nodes satisfying a predicate.
  QuadratureRule restricted(const std::function<bool(Complex)>& keep) const;

  const std::vector<Complex>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double total_weight() const;

  void add(Complex z, double w) {
    nodes_.push_back(z);
    weights_.push_back(w);
  }

 private:
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
};

/// Sum of f over the rule. Throws std::domain_error on non-finite samples.
double integrate_disk(const std::function<double(Complex)>& f, const QuadratureRule& rule);
Complex integrate_disk_complex(const std::function<Complex(Complex)>& f, const QuadratureRule& rule);

}  // namespace treecap
