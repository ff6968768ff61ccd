#include "treecap/blowups.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treecap/random.hpp"

namespace treecap {

BlowupParams::BlowupParams(double a, double g, double b1, double b, double e, double d, double s_)
    : alpha(a), gamma(g), beta1(b1), beta(b), eps(e), delta(d), s(s_) {
  validate();
}

void BlowupParams::validate() const {
  if (!(0.5 < beta && beta < beta1 && beta1 < gamma && gamma < alpha && alpha < 1.0)) {
    throw std::invalid_argument("BlowupParams: need 1/2 < beta < beta1 < gamma < alpha < 1");
  }
  if (!(eps > 0.0 && eps < 1.0 && delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("BlowupParams: eps and delta must lie in (0, 1)");
  }
  if (!(s > -1.0)) throw std::invalid_argument("BlowupParams: s must exceed -1");
}

double small_arc_limit(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("small_arc_limit: rho must lie in (0, 1]");
  if (rho == 1.0) return kTwoPi;
  return std::pow(rho, 1.0 / (1.0 - rho));
}

ArcUnion disk_blowup(const ArcUnion& g, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("disk_blowup: rho must lie in (0, 1]");
  if (rho == 1.0) return g;
  const double limit = small_arc_limit(rho);
  std::vector<Arc> out;
  for (const Arc& j : g.components()) {
    if (j.length >= limit) {
      throw std::domain_error("disk_blowup: component too long for the small-arc regime");
    }
    out.push_back(j.powered(rho));
  }
  return ArcUnion(std::move(out));
}

ArcUnion disk_blowup_general(const ArcUnion& g, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("disk_blowup_general: rho must lie in (0, 1]");
  if (rho == 1.0) return g;
  const double limit = small_arc_limit(rho);
  std::vector<Arc> out;
  for (const Arc& j : g.components()) {
    if (j.is_full()) return ArcUnion::full_circle();
    // Subarcs of length l slide inside J; the union has half-length max_l ((L - l) + l^rho) / 2.
    double len = j.length < limit ? std::pow(j.length, rho) : j.length - limit + std::pow(limit, rho);
    out.emplace_back(j.center, std::min(len, kTwoPi));
  }
  return ArcUnion(std::move(out));
}

ArcUnion disk_blowup_discretized(const ArcUnion& g, double rho, int n) {
  if (n < 1) throw std::invalid_argument("disk_blowup_discretized: n must be positive");
  std::vector<Arc> out;
  for (const Arc& j : g.components()) {
    for (int k = 1; k <= n; ++k) {
      double l = j.length * k / n;
      double slack = j.length - l;
      for (int p = 0; p <= n; ++p) {
        double c = j.start() + 0.5 * l + slack * p / n;
        out.emplace_back(c, std::min(kTwoPi, std::pow(l, rho)));
      }
    }
  }
  return ArcUnion(std::move(out));
}

NodeId rho_root(NodeId x, double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho_root: rho must lie in (0, 1]");
  int d = depth_of(x);
  int target = static_cast<int>(std::ceil(rho * d - 1e-12));
  target = std::clamp(target, 1, d);
  return ancestor_at(x, target - 1);
}

StoppingTime stopping_time_blowup(const BergmanTree& tree, const StoppingTime& w, double rho) {
  std::vector<NodeId> roots;
  roots.reserve(w.size());
  for (NodeId x : w) {
    if (!tree.contains(x)) throw std::out_of_range("stopping_time_blowup: node outside tree");
    roots.push_back(rho_root(x, rho));
  }
  return minimal_elements(std::move(roots));
}

StoppingTime capacitary_blowup(const ExtremalSolution& sol, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("capacitary_blowup: rho must lie in (0, 1)");
  std::vector<NodeId> out;
  for (NodeId w : sol.targets) {
    for (int l = 0; l <= level_of(w); ++l) {
      NodeId t = ancestor_at(w, l);
      if (sol.H[t] >= rho - 1e-12) {
        out.push_back(t);
        break;
      }
    }
  }
  return minimal_elements(std::move(out));
}

StoppingTime capacitary_blowup(const BergmanTree& tree, const StoppingTime& w, double rho) {
  return capacitary_blowup(cap_recursive(tree, w), rho);
}

namespace {

bool le_with_tol(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-10) + 1e-14; }

bool disjoint(const StoppingTime& a, const StoppingTime& b) {
  return std::none_of(a.begin(), a.end(), [&](NodeId x) { return b.contains(x); });
}

}  // namespace

LemmaCheck verify_newblowup(const BergmanTree& tree, const StoppingTime& w, double rho) {
  ExtremalSolution sol = cap_recursive(tree, w);
  StoppingTime hat = capacitary_blowup(sol, rho);
  LemmaCheck c;
  c.lhs = capacity(tree, hat);
  c.rhs = sol.cap / (rho * rho);
  c.holds = le_with_tol(c.lhs, c.rhs);
  return c;
}

LemmaCheck verify_newcondenser(const BergmanTree& tree, const StoppingTime& w, double rho) {
  ExtremalSolution sol = cap_recursive(tree, w);
  LemmaCheck c;
  c.rhs = 4.0 * sol.cap / ((1.0 - rho) * (1.0 - rho));
  c.applicable = sol.cap <= 0.25 * (1.0 - rho) * (1.0 - rho);
  StoppingTime hat = capacitary_blowup(sol, rho);
  if (!disjoint(hat, w)) {
    c.lhs = std::numeric_limits<double>::infinity();
    c.holds = !c.applicable;
    return c;
  }
  c.lhs = cap_condenser(tree, CondenserProblem(tree, hat, w)).cap;
  c.holds = !c.applicable || le_with_tol(c.lhs, c.rhs);
  return c;
}

ContainCheck verify_contain(const BergmanTree& tree, const StoppingTime& w, double rho) {
  ExtremalSolution sol = cap_recursive(tree, w);
  StoppingTime stop = stopping_time_blowup(tree, w, rho);
  StoppingTime hat = capacitary_blowup(sol, rho);
  ContainCheck c;
  c.contained = std::all_of(stop.begin(), stop.end(), [&](NodeId x) { return hat.covers(x); });
  c.bound.lhs = capacity(tree, stop);
  c.bound.rhs = sol.cap / (rho * rho);
  c.bound.holds = le_with_tol(c.bound.lhs, c.bound.rhs);
  return c;
}

namespace {

Complex sample_in_tent(const Arc& arc, Rng& rng) {
  const Tent t(arc);
  double r_min = std::clamp(std::min(1.0 - arc.length / kTwoPi, std::cos(0.5 * arc.length)), 0.0, 1.0);
  double depth_max = 1.0 - r_min;
  for (;;) {
    // Log-uniform distance to the boundary, uniform angle across the arc.
    double u = rng.uniform();
    double depth = depth_max * std::pow(1e-6, u);
    double ang = arc.start() + arc.length * rng.uniform();
    Complex z = std::polar(1.0 - depth, ang);
    if (t.contains(z)) return z;
  }
}

}  // namespace

GeoseparationReport verify_geoseparation(const ArcUnion& g, double rho, std::size_t n_samples,
                                         std::uint64_t seed) {
  GeoseparationReport rep;
  if (g.empty()) {
    rep.vacuous = true;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    return rep;
  }
  Rng rng(seed);
  ArcUnion blown = disk_blowup_general(g, rho);
  TentUnion outside_of(blown);
  if (blown.is_full()) {
    rep.vacuous = true;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    return rep;
  }
  const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  std::vector<Complex> ws;
  std::vector<Complex> zs;
  while (ws.size() < side) {
    const Arc& a = g.components()[rng.below(g.size())];
    ws.push_back(sample_in_tent(a, rng));
  }
  while (zs.size() < side) {
    Complex z;
    if (rng.uniform() < 0.5) {
      double r = std::sqrt(rng.uniform());
      z = std::polar(r, kTwoPi * rng.uniform());
    } else {
      const Arc& a = blown.components()[rng.below(blown.size())];
      double depth = std::pow(1e-6, rng.uniform());
      double ang = a.center + (rng.uniform() - 0.5) * 2.0 * std::max(a.length, 0.2);
      z = std::polar(1.0 - depth, ang);
    }
    if (!outside_of.contains(z)) zs.push_back(z);
  }
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (Complex w : ws) {
    double scale = std::pow(1.0 - std::norm(w), rho);
    for (Complex z : zs) {
      rep.min_ratio = std::min(rep.min_ratio, std::abs(z - w) / scale);
      ++rep.pairs;
    }
  }
  return rep;
}

}  // namespace treecap
