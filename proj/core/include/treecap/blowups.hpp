#pragma once

#include <cstdint>
#include <string>

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

/// Exponents for the main estimate: 1/2 < beta < beta1 < gamma < alpha < 1, eps/delta in (0,1), s > -1.
struct BlowupParams {
  double alpha = 0.95;
  double gamma = 0.9;
  double beta1 = 0.85;
  double beta = 0.8;
  double eps = 0.5;
  double delta = 0.5;
  double s = 1.0;

  BlowupParams() = default;
  BlowupParams(double alpha, double gamma, double beta1, double beta, double eps, double delta, double s);

  void validate() const;
};

/// Longest component length for which J -> J^rho is the exact union of I^rho over subarcs I of J.
double small_arc_limit(double rho);

/// Shadow of the disk blowup G_D^rho. Throws std::domain_error outside the small-arc regime.
ArcUnion disk_blowup(const ArcUnion& g, double rho);

/// Union of I^rho over all subarcs I of each component, valid for any component length.
ArcUnion disk_blowup_general(const ArcUnion& g, double rho);

/// Brute-force union of I^rho over a grid of subarcs (n lengths x n positions per component).
ArcUnion disk_blowup_discretized(const ArcUnion& g, double rho, int n);

/// Ancestor R^rho x with rho d(x) <= d(R^rho x) < rho d(x) + 1.
NodeId rho_root(NodeId x, double rho);

StoppingTime stopping_time_blowup(const BergmanTree& tree, const StoppingTime& w, double rho);

/// First crossing of the potential H = Ih of the extremal for W at height rho.
StoppingTime capacitary_blowup(const BergmanTree& tree, const StoppingTime& w, double rho);
StoppingTime capacitary_blowup(const ExtremalSolution& sol, double rho);

struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool applicable = true;
  bool holds = true;
};

/// Cap(W^rho) <= rho^-2 Cap(W) for the capacitary blowup.
LemmaCheck verify_newblowup(const BergmanTree& tree, const StoppingTime& w, double rho);

/// Cap(Ŵ^rho, W) <= 4 (1-rho)^-2 Cap(W) whenever Cap(W) <= (1-rho)^2 / 4.
LemmaCheck verify_newcondenser(const BergmanTree& tree, const StoppingTime& w, double rho);

struct ContainCheck {
  bool contained = false;
  LemmaCheck bound;
  bool holds() const { return contained && bound.holds; }
};

/// shadow(W_T^rho) within shadow(Ŵ^rho) and Cap(W_T^rho) <= rho^-2 Cap(W).
ContainCheck verify_contain(const BergmanTree& tree, const StoppingTime& w, double rho);

struct GeoseparationReport {
  std::size_t pairs = 0;
  double min_ratio = 0.0;
  bool vacuous = false;
};

/// Sample w in T(G) and z outside the tent region of the rho disk blowup; report min |z-w| / (1-|w|^2)^rho.
GeoseparationReport verify_geoseparation(const ArcUnion& g, double rho, std::size_t n_samples, std::uint64_t seed);

/// Aggregate of a randomized lemma batch.
struct LemmaReport {
  std::string lemma;
  std::size_t instances = 0;
  std::size_t applicable = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs over applicable instances
  bool pass() const { return violations == 0; }
};

}  // namespace treecap
