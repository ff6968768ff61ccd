#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "treecap/arcs.hpp"

namespace treecap {

/// Node handle in heap numbering: level l, angular index m  <->  id = 2^l - 1 + m.
struct NodeId {
  std::uint32_t value = 0;

  constexpr NodeId() = default;
  constexpr explicit NodeId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr NodeId kRoot{0};

constexpr int level_of(NodeId x) { return std::bit_width(x.value + 1) - 1; }
constexpr std::uint32_t index_of(NodeId x) { return x.value + 1 - (1u << level_of(x)); }
constexpr NodeId node_at(int level, std::uint32_t index) { return NodeId((1u << level) - 1 + index); }
constexpr NodeId parent_of(NodeId x) { return NodeId((x.value - 1) / 2); }
constexpr NodeId minus_child(NodeId x) { return NodeId(2 * x.value + 1); }
constexpr NodeId plus_child(NodeId x) { return NodeId(2 * x.value + 2); }
/// Number of nodes on the geodesic [o, x].
constexpr int depth_of(NodeId x) { return level_of(x) + 1; }

/// Ancestor of x at the given level (x itself when level == level_of(x)).
constexpr NodeId ancestor_at(NodeId x, int level) {
  return NodeId(((x.value + 1) >> (level_of(x) - level)) - 1);
}

/// a <= b in the tree order: a lies on the geodesic [o, b].
constexpr bool is_ancestor_or_self(NodeId a, NodeId b) {
  int la = level_of(a);
  int lb = level_of(b);
  return la <= lb && ancestor_at(b, la) == a;
}

/// Polar box of a node.
struct Box {
  double r_inner;
  double r_outer;
  double angle_start;
  double angle_width;

  bool contains(Complex z) const;
  /// Normalized area (the disk has area 1).
  double area() const { return angle_width / kTwoPi * (r_outer * r_outer - r_inner * r_inner); }
};

/// Dyadic decomposition of the disk into Whitney-type boxes, rotated by theta.
class BergmanTree {
 public:
  static constexpr int kMaxLevel = 24;

  BergmanTree(int max_level, double theta);

  int max_level() const { return max_level_; }
  double theta() const { return theta_; }
  std::size_t node_count() const { return (std::size_t{1} << (max_level_ + 1)) - 1; }

  bool contains(NodeId x) const { return x.value < node_count(); }
  bool is_leaf(NodeId x) const { return level_of(x) == max_level_; }
  NodeId root() const { return kRoot; }
  NodeId parent(NodeId x) const;
  NodeId child(NodeId x, bool plus) const;

  Arc arc(NodeId x) const;
  Complex index_point(NodeId x) const;
  Box box(NodeId x) const;

  /// Node whose box contains z, truncated at max_level. z must satisfy |z| < 1.
  NodeId locate(Complex z) const;

  /// All nodes at a given level.
  std::vector<NodeId> level_nodes(int level) const;

 private:
  void check(NodeId x) const;

  int max_level_;
  double theta_;
};

BergmanTree build_tree(int max_level, double theta);

Arc node_arc(const BergmanTree& tree, NodeId x);
Complex node_index_point(const BergmanTree& tree, NodeId x);

/// Antichain of tree nodes, kept sorted and duplicate free.
class StoppingTime {
 public:
  StoppingTime() = default;
  /// Throws std::invalid_argument when the nodes are not pairwise incomparable.
  explicit StoppingTime(std::vector<NodeId> nodes);

  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(NodeId x) const;
  /// Member of the stopping time lying on [o, x], if any.
  bool covers(NodeId x, NodeId* which = nullptr) const;

  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }

  friend bool operator==(const StoppingTime&, const StoppingTime&) = default;

 private:
  std::vector<NodeId> nodes_;
};

bool is_antichain(std::span<const NodeId> nodes);

/// Keep only the minimal (shallowest) elements of a node set.
StoppingTime minimal_elements(std::vector<NodeId> nodes);

/// F > E: every member of F has an ancestor-or-self in E.
bool follows(const StoppingTime& f, const StoppingTime& e);
/// Strict version: every member of F has a proper ancestor in E.
bool strictly_follows(const StoppingTime& f, const StoppingTime& e);

ArcUnion shadow(const BergmanTree& tree, const StoppingTime& w);

/// Maximal nodes whose arcs lie in G.
StoppingTime open_set_to_stopping_time(const BergmanTree& tree, const ArcUnion& g);

/// Union of the geodesics [y, x], x in F, y its ancestor in E. Sorted.
std::vector<NodeId> geodesic_set(const BergmanTree& tree, const StoppingTime& e, const StoppingTime& f);

/// Tent region over the arcs of a stopping time.
TentUnion tent_region(const BergmanTree& tree, const StoppingTime& w);

}  // namespace treecap

template <>
struct std::hash<treecap::NodeId> {
  std::size_t operator()(treecap::NodeId x) const noexcept { return std::hash<std::uint32_t>{}(x.value); }
};
