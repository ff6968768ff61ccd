#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "treecap/tree_capacity.hpp"

// Dual form of  min sum f^2  s.t.  (A f)_i >= 1,  where row i of A is the indicator of the path from
// the source of target i down to target i. With Q = A A^T the dual is
//   min 1/2 l^T Q l - 1^T l,  l >= 0,
// and the primal minimum equals l^T Q l at the dual optimum.

namespace treecap {
namespace {

constexpr int kMaxOracleLevel = 11;
constexpr double kKktTol = 1e-10;

struct Instance {
  std::vector<NodeId> targets;
  std::vector<NodeId> sources;
};

Eigen::MatrixXd gram(const Instance& in) {
  const auto n = static_cast<Eigen::Index>(in.targets.size());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (in.sources[i] != in.sources[j]) continue;
      NodeId a = in.targets[i];
      NodeId b = in.targets[j];
      int l = std::min(level_of(a), level_of(b));
      while (ancestor_at(a, l) != ancestor_at(b, l)) --l;
      double common = l - level_of(in.sources[i]) + 1;
      q(i, j) = common;
      q(j, i) = common;
    }
  }
  return q;
}

// Solve Q_PP x = 1 for the passive set P.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& q, const std::vector<Eigen::Index>& p) {
  const auto m = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = q(p[i], p[j]);
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(sub);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("qp_oracle: factorization failed");
  return ldlt.solve(Eigen::VectorXd::Ones(m));
}

double kkt_residual(const Eigen::MatrixXd& q, const Eigen::VectorXd& l) {
  Eigen::VectorXd w = q * l - Eigen::VectorXd::Ones(l.size());
  double res = 0.0;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    res = std::max(res, std::max(0.0, -l(i)));
    res = std::max(res, std::max(0.0, -w(i)));
    res = std::max(res, std::abs(l(i) * w(i)));
  }
  return res;
}

// Lawson-Hanson active-set iteration for the nonnegative QP.
Eigen::VectorXd lawson_hanson(const Eigen::MatrixXd& q) {
  const Eigen::Index n = q.rows();
  Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
  std::vector<char> passive(n, 0);
  const int max_outer = static_cast<int>(3 * n + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::VectorXd g = Eigen::VectorXd::Ones(n) - q * l;
    Eigen::Index best = -1;
    double best_g = kKktTol;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!passive[i] && g(i) > best_g) {
        best_g = g(i);
        best = i;
      }
    }
    if (best < 0) return l;
    passive[best] = 1;
    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<Eigen::Index> p;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[i]) p.push_back(i);
      }
      Eigen::VectorXd s = passive_solve(q, p);
      bool positive = true;
      for (Eigen::Index k = 0; k < s.size(); ++k) positive = positive && s(k) > 0.0;
      if (positive) {
        l.setZero();
        for (std::size_t k = 0; k < p.size(); ++k) l(p[k]) = s(static_cast<Eigen::Index>(k));
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < p.size(); ++k) {
        double sk = s(static_cast<Eigen::Index>(k));
        if (sk <= 0.0) {
          double li = l(p[k]);
          alpha = std::min(alpha, li / (li - sk));
        }
      }
      for (std::size_t k = 0; k < p.size(); ++k) {
        Eigen::Index i = p[k];
        l(i) += alpha * (s(static_cast<Eigen::Index>(k)) - l(i));
        if (l(i) <= 1e-15) {
          l(i) = 0.0;
          passive[i] = 0;
        }
      }
    }
  }
  throw std::runtime_error("qp_oracle: active-set iteration did not converge");
}

double solve(const Instance& in) {
  if (in.targets.empty()) return 0.0;
  Eigen::MatrixXd q = gram(in);
  std::vector<Eigen::Index> all(q.rows());
  for (Eigen::Index i = 0; i < q.rows(); ++i) all[i] = i;
  Eigen::VectorXd l = passive_solve(q, all);
  if (kkt_residual(q, l) > kKktTol) l = lawson_hanson(q);
  double res = kkt_residual(q, l);
  if (res > kKktTol) throw std::runtime_error("qp_oracle: KKT residual above tolerance");
  return l.dot(q * l);
}

void check_size(const BergmanTree& tree) {
  if (tree.max_level() > kMaxOracleLevel) {
    throw std::invalid_argument("qp_oracle: tree too deep for the dense oracle (max_level <= 11)");
  }
}

}  // namespace

double qp_oracle(const BergmanTree& tree, const CondenserProblem& problem) {
  check_size(tree);
  Instance in;
  for (NodeId t : problem.targets()) {
    NodeId s;
    problem.sources().covers(t, &s);
    in.targets.push_back(t);
    in.sources.push_back(s);
  }
  return solve(in);
}

double qp_oracle(const BergmanTree& tree, const StoppingTime& targets) {
  check_size(tree);
  if (targets.empty()) throw std::invalid_argument("qp_oracle: empty target set");
  Instance in;
  for (NodeId t : targets) {
    if (!tree.contains(t)) throw std::out_of_range("qp_oracle: target outside tree");
    in.targets.push_back(t);
    in.sources.push_back(kRoot);
  }
  return solve(in);
}

}  // namespace treecap
