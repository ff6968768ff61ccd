#pragma once

#include <span>
#include <vector>

#include "treecap/bergman_tree.hpp"

namespace treecap {

/// Real values on the nodes of a tree with a given depth, stored densely by node id.
class TreeFunction {
 public:
  TreeFunction() = default;
  explicit TreeFunction(int max_level);
  TreeFunction(int max_level, std::vector<double> values);

  int max_level() const { return max_level_; }
  std::size_t size() const { return values_.size(); }
  double operator[](NodeId x) const { return values_[x.value]; }
  double& operator[](NodeId x) { return values_[x.value]; }
  std::span<const double> values() const { return values_; }

  double sum_of_squares() const;

 private:
  int max_level_ = 0;
  std::vector<double> values_;
};

/// (I f)(x) = sum of f over [o, x].
TreeFunction path_sum(const TreeFunction& f);
/// (Delta F)(x) = F(x) - F(parent x), with F(o^-) = 0.
TreeFunction path_diff(const TreeFunction& f);

/// Pair of stopping times (E, F) with every member of F strictly below a member of E.
class CondenserProblem {
 public:
  CondenserProblem(const BergmanTree& tree, StoppingTime sources, StoppingTime targets);

  const StoppingTime& sources() const { return sources_; }
  const StoppingTime& targets() const { return targets_; }

 private:
  StoppingTime sources_;
  StoppingTime targets_;
};

struct ExtremalSolution {
  TreeFunction h;
  TreeFunction H;
  double cap = 0.0;
  /// Local roots of the problem: {o} for a single-root problem, E for a condenser.
  StoppingTime sources;
  StoppingTime targets;
};

/// Extremal for Cap(E) on the whole tree via the branching-point recursion.
ExtremalSolution cap_recursive(const BergmanTree& tree, const StoppingTime& targets);

/// Extremal for the condenser Cap(E, F): sum of local extremals rooted at the members of E.
ExtremalSolution cap_condenser(const BergmanTree& tree, const CondenserProblem& problem);

/// Independent minimization of sum f^2 subject to If >= 1 on the targets, by an active-set solver.
double qp_oracle(const BergmanTree& tree, const CondenserProblem& problem);
double qp_oracle(const BergmanTree& tree, const StoppingTime& targets);

struct VerificationReport {
  double harmonicity = 0.0;   // max |h(x) - h(x+) - h(x-)| off sources and targets
  double energy = 0.0;        // |sum_{e in sources} h(e) - ||h||^2|
  double boundary = 0.0;      // max |Ih - 1| on targets
  double cap_consistency = 0.0;  // |cap - ||h||^2| / cap
  double negativity = 0.0;    // max(0, -min h)
  double support = 0.0;       // max |h| off the geodesic set
  double min_on_geodesic = 0.0;

  double max_violation() const;
  bool ok(double tol = 1e-10) const { return max_violation() <= tol && min_on_geodesic > 0.0; }
};

VerificationReport verify_extremal(const ExtremalSolution& sol);

struct StoppingTimeSum {
  double sum = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// Sum of |h| over an antichain, compared with 2 Cap.
StoppingTimeSum stopping_time_sum_check(const ExtremalSolution& sol, const StoppingTime& s);

/// Capacity of a single-root problem without building dense node arrays.
double capacity(const BergmanTree& tree, const StoppingTime& targets);

}  // namespace treecap
