#include "treecap/bergman_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace treecap {

bool Box::contains(Complex z) const {
  double r = std::abs(z);
  if (r < r_inner || r >= r_outer) return false;
  if (angle_width >= kTwoPi) return true;
  double off = wrap_angle(std::arg(z) - angle_start);
  return off < angle_width;
}

BergmanTree::BergmanTree(int max_level, double theta) : max_level_(max_level), theta_(wrap_angle(theta)) {
  if (max_level < 0 || max_level > kMaxLevel) {
    throw std::invalid_argument("BergmanTree: max_level must lie in [0, 24]");
  }
  if (!std::isfinite(theta)) throw std::invalid_argument("BergmanTree: theta must be finite");
}

void BergmanTree::check(NodeId x) const {
  if (!contains(x)) throw std::out_of_range("BergmanTree: node outside tree");
}

NodeId BergmanTree::parent(NodeId x) const {
  check(x);
  if (x == kRoot) throw std::invalid_argument("BergmanTree: root has no parent");
  return parent_of(x);
}

NodeId BergmanTree::child(NodeId x, bool plus) const {
  check(x);
  if (is_leaf(x)) throw std::invalid_argument("BergmanTree: leaf has no children");
  return plus ? plus_child(x) : minus_child(x);
}

Arc BergmanTree::arc(NodeId x) const {
  check(x);
  int l = level_of(x);
  double width = kTwoPi / static_cast<double>(std::uint64_t{1} << l);
  return Arc::from_start(theta_ + width * static_cast<double>(index_of(x)), width);
}

Complex BergmanTree::index_point(NodeId x) const { return arc(x).index_point(); }

Box BergmanTree::box(NodeId x) const {
  check(x);
  int l = level_of(x);
  double scale = std::ldexp(1.0, -l);
  Box b;
  b.r_inner = l == 0 ? 0.0 : 1.0 - scale;
  b.r_outer = 1.0 - 0.5 * scale;
  b.angle_width = kTwoPi * scale;
  b.angle_start = wrap_angle(theta_ + b.angle_width * static_cast<double>(index_of(x)));
  return b;
}

NodeId BergmanTree::locate(Complex z) const {
  double r = std::abs(z);
  if (!(r < 1.0)) throw std::domain_error("BergmanTree::locate: point outside the open disk");
  int l = 0;
  if (r >= 0.5) l = static_cast<int>(std::floor(-std::log2(1.0 - r)));
  // Guard against rounding at ring boundaries.
  while (l > 0 && r < 1.0 - std::ldexp(1.0, -l)) --l;
  while (r >= 1.0 - std::ldexp(1.0, -(l + 1))) ++l;
  l = std::min(l, max_level_);
  double frac = wrap_angle(std::arg(z) - theta_) / kTwoPi;
  auto count = std::uint32_t{1} << l;
  auto m = static_cast<std::uint32_t>(std::floor(frac * count));
  if (m >= count) m = count - 1;
  return node_at(l, m);
}

std::vector<NodeId> BergmanTree::level_nodes(int level) const {
  if (level < 0 || level > max_level_) throw std::out_of_range("BergmanTree: level outside tree");
  std::vector<NodeId> out;
  auto count = std::uint32_t{1} << level;
  out.reserve(count);
  for (std::uint32_t m = 0; m < count; ++m) out.push_back(node_at(level, m));
  return out;
}

BergmanTree build_tree(int max_level, double theta) { return BergmanTree(max_level, theta); }

Arc node_arc(const BergmanTree& tree, NodeId x) { return tree.arc(x); }

Complex node_index_point(const BergmanTree& tree, NodeId x) { return tree.index_point(x); }

bool is_antichain(std::span<const NodeId> nodes) {
  std::unordered_set<NodeId> set(nodes.begin(), nodes.end());
  if (set.size() != nodes.size()) return false;
  for (NodeId x : nodes) {
    for (int l = 0; l < level_of(x); ++l) {
      if (set.count(ancestor_at(x, l))) return false;
    }
  }
  return true;
}

StoppingTime::StoppingTime(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  if (!is_antichain(nodes_)) throw std::invalid_argument("StoppingTime: nodes are not an antichain");
}

bool StoppingTime::contains(NodeId x) const { return std::binary_search(nodes_.begin(), nodes_.end(), x); }

bool StoppingTime::covers(NodeId x, NodeId* which) const {
  for (int l = level_of(x); l >= 0; --l) {
    NodeId a = ancestor_at(x, l);
    if (contains(a)) {
      if (which) *which = a;
      return true;
    }
  }
  return false;
}

StoppingTime minimal_elements(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::unordered_set<NodeId> set(nodes.begin(), nodes.end());
  std::vector<NodeId> keep;
  for (NodeId x : nodes) {
    bool dominated = false;
    for (int l = 0; l < level_of(x) && !dominated; ++l) dominated = set.count(ancestor_at(x, l)) > 0;
    if (!dominated) keep.push_back(x);
  }
  return StoppingTime(std::move(keep));
}

bool follows(const StoppingTime& f, const StoppingTime& e) {
  return std::all_of(f.begin(), f.end(), [&](NodeId x) { return e.covers(x); });
}

bool strictly_follows(const StoppingTime& f, const StoppingTime& e) {
  return std::all_of(f.begin(), f.end(), [&](NodeId x) { return x != kRoot && e.covers(parent_of(x)); });
}

ArcUnion shadow(const BergmanTree& tree, const StoppingTime& w) {
  std::vector<Arc> arcs;
  arcs.reserve(w.size());
  for (NodeId x : w) arcs.push_back(tree.arc(x));
  return ArcUnion(std::move(arcs));
}

StoppingTime open_set_to_stopping_time(const BergmanTree& tree, const ArcUnion& g) {
  if (g.empty()) throw std::invalid_argument("open_set_to_stopping_time: empty arc union");
  std::vector<NodeId> out;
  std::vector<NodeId> stack{kRoot};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    Arc a = tree.arc(x);
    if (g.contains(a)) {
      out.push_back(x);
      continue;
    }
    if (tree.is_leaf(x)) continue;
    // Only descend where the arc meets G.
    bool meets = false;
    for (const Arc& c : g.components()) {
      double off = std::abs(angle_diff(c.center, a.center));
      if (c.is_full() || off < 0.5 * (a.length + c.length) - kAngleTol) {
        meets = true;
        break;
      }
    }
    if (!meets) continue;
    stack.push_back(plus_child(x));
    stack.push_back(minus_child(x));
  }
  return StoppingTime(std::move(out));
}

std::vector<NodeId> geodesic_set(const BergmanTree& tree, const StoppingTime& e, const StoppingTime& f) {
  std::vector<NodeId> out;
  for (NodeId x : f) {
    if (!tree.contains(x)) throw std::out_of_range("geodesic_set: node outside tree");
    NodeId top;
    if (!e.covers(x, &top)) throw std::invalid_argument("geodesic_set: F does not follow E");
    for (int l = level_of(top); l <= level_of(x); ++l) out.push_back(ancestor_at(x, l));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TentUnion tent_region(const BergmanTree& tree, const StoppingTime& w) {
  std::vector<Arc> arcs;
  arcs.reserve(w.size());
  for (NodeId x : w) arcs.push_back(tree.arc(x));
  return TentUnion(arcs);
}

}  // namespace treecap
