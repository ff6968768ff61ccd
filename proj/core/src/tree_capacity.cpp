#include "treecap/tree_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treecap {

TreeFunction::TreeFunction(int max_level)
    : max_level_(max_level), values_((std::size_t{1} << (max_level + 1)) - 1, 0.0) {}

TreeFunction::TreeFunction(int max_level, std::vector<double> values)
    : max_level_(max_level), values_(std::move(values)) {
  if (values_.size() != (std::size_t{1} << (max_level + 1)) - 1) {
    throw std::invalid_argument("TreeFunction: value count does not match node count");
  }
}

double TreeFunction::sum_of_squares() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

TreeFunction path_sum(const TreeFunction& f) {
  TreeFunction out(f.max_level());
  if (f.size() == 0) return out;
  out[kRoot] = f[kRoot];
  for (std::uint32_t i = 1; i < f.size(); ++i) {
    NodeId x(i);
    out[x] = out[parent_of(x)] + f[x];
  }
  return out;
}

TreeFunction path_diff(const TreeFunction& f) {
  TreeFunction out(f.max_level());
  if (f.size() == 0) return out;
  out[kRoot] = f[kRoot];
  for (std::uint32_t i = 1; i < f.size(); ++i) {
    NodeId x(i);
    out[x] = f[x] - f[parent_of(x)];
  }
  return out;
}

CondenserProblem::CondenserProblem(const BergmanTree& tree, StoppingTime sources, StoppingTime targets)
    : sources_(std::move(sources)), targets_(std::move(targets)) {
  for (NodeId x : sources_) {
    if (!tree.contains(x)) throw std::out_of_range("CondenserProblem: source outside tree");
  }
  for (NodeId x : targets_) {
    if (!tree.contains(x)) throw std::out_of_range("CondenserProblem: target outside tree");
  }
  if (!strictly_follows(targets_, sources_)) {
    throw std::invalid_argument("CondenserProblem: targets must lie strictly below the sources");
  }
}

namespace {

struct Segment {
  NodeId top;
  NodeId bottom;
  int length;
  double cap;
  int parent;
};

class Recursion {
 public:
  explicit Recursion(std::vector<Segment>* segments) : segments_(segments) {}

  // Capacity of the problem rooted at r with the given targets, all inside S(r).
  double solve(NodeId r, std::vector<NodeId> targets, int parent) {
    NodeId x = r;
    std::vector<NodeId> minus;
    std::vector<NodeId> plus;
    for (;;) {
      if (targets.size() == 1 && targets.front() == x) break;
      minus.clear();
      plus.clear();
      int l = level_of(x) + 1;
      for (NodeId t : targets) {
        if (t == x) throw std::logic_error("cap_recursive: targets are not an antichain");
        (ancestor_at(t, l) == minus_child(x) ? minus : plus).push_back(t);
      }
      if (!minus.empty() && !plus.empty()) break;
      x = minus.empty() ? plus_child(x) : minus_child(x);
    }
    int d = level_of(x) - level_of(r) + 1;
    int self = -1;
    if (segments_) {
      segments_->push_back({r, x, d, 0.0, parent});
      self = static_cast<int>(segments_->size()) - 1;
    }
    double cap;
    if (targets.size() == 1 && targets.front() == x) {
      cap = 1.0 / d;
    } else {
      std::vector<NodeId> p = std::move(plus);
      std::vector<NodeId> m = std::move(minus);
      double s = solve(minus_child(x), std::move(m), self) + solve(plus_child(x), std::move(p), self);
      cap = s / (1.0 + d * s);
    }
    if (segments_) (*segments_)[self].cap = cap;
    return cap;
  }

 private:
  std::vector<Segment>* segments_;
};

void assemble(const std::vector<Segment>& segs, TreeFunction& h) {
  std::vector<double> scale(segs.size(), 1.0);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Segment& s = segs[i];
    if (s.parent >= 0) {
      const Segment& p = segs[s.parent];
      scale[i] = scale[s.parent] * (1.0 - p.length * p.cap);
    }
    double v = scale[i] * s.cap;
    for (int l = level_of(s.top); l <= level_of(s.bottom); ++l) h[ancestor_at(s.bottom, l)] += v;
  }
}

std::vector<NodeId> targets_below(const StoppingTime& targets, NodeId e) {
  std::vector<NodeId> out;
  for (NodeId t : targets) {
    if (is_ancestor_or_self(e, t)) out.push_back(t);
  }
  return out;
}

}  // namespace

ExtremalSolution cap_recursive(const BergmanTree& tree, const StoppingTime& targets) {
  if (targets.empty()) throw std::invalid_argument("cap_recursive: empty target set");
  for (NodeId x : targets) {
    if (!tree.contains(x)) throw std::out_of_range("cap_recursive: target outside tree");
  }
  std::vector<Segment> segs;
  Recursion rec(&segs);
  ExtremalSolution sol;
  sol.cap = rec.solve(kRoot, targets.nodes(), -1);
  sol.h = TreeFunction(tree.max_level());
  assemble(segs, sol.h);
  sol.H = path_sum(sol.h);
  sol.sources = StoppingTime({kRoot});
  sol.targets = targets;
  return sol;
}

ExtremalSolution cap_condenser(const BergmanTree& tree, const CondenserProblem& problem) {
  ExtremalSolution sol;
  sol.h = TreeFunction(tree.max_level());
  std::vector<Segment> segs;
  for (NodeId e : problem.sources()) {
    std::vector<NodeId> below = targets_below(problem.targets(), e);
    if (below.empty()) continue;
    segs.clear();
    Recursion rec(&segs);
    sol.cap += rec.solve(e, std::move(below), -1);
    assemble(segs, sol.h);
  }
  sol.H = path_sum(sol.h);
  sol.sources = problem.sources();
  sol.targets = problem.targets();
  return sol;
}

double capacity(const BergmanTree& tree, const StoppingTime& targets) {
  if (targets.empty()) throw std::invalid_argument("capacity: empty target set");
  for (NodeId x : targets) {
    if (!tree.contains(x)) throw std::out_of_range("capacity: target outside tree");
  }
  Recursion rec(nullptr);
  return rec.solve(kRoot, targets.nodes(), -1);
}

double VerificationReport::max_violation() const {
  return std::max({harmonicity, energy, boundary, cap_consistency, negativity, support});
}

VerificationReport verify_extremal(const ExtremalSolution& sol) {
  VerificationReport r;
  const TreeFunction& h = sol.h;
  const int max_level = h.max_level();
  std::vector<NodeId> geo = geodesic_set(BergmanTree(max_level, 0.0), sol.sources, sol.targets);
  std::vector<char> on_geo(h.size(), 0);
  for (NodeId x : geo) on_geo[x.value] = 1;

  double norm2 = h.sum_of_squares();
  r.cap_consistency = sol.cap > 0.0 ? std::abs(sol.cap - norm2) / sol.cap : std::abs(norm2);

  double source_sum = 0.0;
  for (NodeId e : sol.sources) source_sum += h[e];
  r.energy = std::abs(source_sum - norm2);

  for (NodeId t : sol.targets) r.boundary = std::max(r.boundary, std::abs(sol.H[t] - 1.0));

  r.min_on_geodesic = geo.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < h.size(); ++i) {
    NodeId x(i);
    double v = h[x];
    r.negativity = std::max(r.negativity, -v);
    if (on_geo[i]) {
      r.min_on_geodesic = std::min(r.min_on_geodesic, v);
      if (!sol.sources.contains(x) && !sol.targets.contains(x) && level_of(x) < max_level) {
        r.harmonicity = std::max(r.harmonicity, std::abs(v - h[minus_child(x)] - h[plus_child(x)]));
      }
    } else {
      r.support = std::max(r.support, std::abs(v));
    }
  }
  return r;
}

StoppingTimeSum stopping_time_sum_check(const ExtremalSolution& sol, const StoppingTime& s) {
  StoppingTimeSum out;
  for (NodeId x : s) {
    if (x.value < sol.h.size()) out.sum += std::abs(sol.h[x]);
  }
  out.bound = 2.0 * sol.cap;
  out.holds = out.sum <= out.bound * (1.0 + 1e-12) + 1e-15;
  return out;
}

}  // namespace treecap
