#include "treecap/instances.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treecap {

namespace {

NodeId random_node(Rng& rng, int level) {
  return node_at(level, static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << level)));
}

NodeId random_descendant(Rng& rng, NodeId x, int level) {
  int extra = level - level_of(x);
  std::uint32_t offset = static_cast<std::uint32_t>(rng.below(std::uint64_t{1} << extra));
  return node_at(level, (index_of(x) << extra) + offset);
}

}  // namespace

StoppingTime random_stopping_time(const BergmanTree& tree, Rng& rng, int draws, int min_level, int max_level) {
  max_level = std::min(max_level, tree.max_level());
  if (draws < 1 || min_level < 0 || min_level > max_level) {
    throw std::invalid_argument("random_stopping_time: bad level range or draw count");
  }
  std::vector<NodeId> nodes;
  nodes.reserve(static_cast<std::size_t>(draws));
  for (int i = 0; i < draws; ++i) nodes.push_back(random_node(rng, rng.between(min_level, max_level)));
  return minimal_elements(std::move(nodes));
}

StoppingTime random_clustered_stopping_time(const BergmanTree& tree, Rng& rng, int anchor_level, int count) {
  if (anchor_level < 0 || anchor_level >= tree.max_level() || count < 1) {
    throw std::invalid_argument("random_clustered_stopping_time: bad anchor level or count");
  }
  NodeId anchor = random_node(rng, anchor_level);
  std::vector<NodeId> nodes;
  for (int i = 0; i < count; ++i) {
    int level = rng.between(std::min(tree.max_level(), anchor_level + (tree.max_level() - anchor_level) / 2),
                            tree.max_level());
    nodes.push_back(random_descendant(rng, anchor, level));
  }
  return minimal_elements(std::move(nodes));
}

std::pair<StoppingTime, StoppingTime> random_condenser(const BergmanTree& tree, Rng& rng, int draws) {
  const int depth = tree.max_level();
  if (depth < 2) throw std::invalid_argument("random_condenser: tree too shallow");
  StoppingTime e = random_stopping_time(tree, rng, std::max(1, draws / 3), 0, std::max(0, depth / 2));
  std::vector<NodeId> f;
  for (int i = 0; i < draws; ++i) {
    NodeId top = e.nodes()[rng.below(e.size())];
    if (level_of(top) >= depth) continue;
    f.push_back(random_descendant(rng, top, rng.between(level_of(top) + 1, depth)));
  }
  if (f.empty()) {
    NodeId top = e.nodes().front();
    f.push_back(random_descendant(rng, top, std::min(depth, level_of(top) + 1)));
  }
  return {e, minimal_elements(std::move(f))};
}

ArcUnion random_arc_union(Rng& rng, int max_components, double min_len, double max_len) {
  if (max_components < 1 || !(min_len > 0.0) || max_len < min_len) {
    throw std::invalid_argument("random_arc_union: bad parameters");
  }
  int k = rng.between(1, max_components);
  std::vector<Arc> arcs;
  for (int i = 0; i < k; ++i) {
    double len = min_len * std::pow(max_len / min_len, rng.uniform());
    arcs.emplace_back(kTwoPi * rng.uniform(), len);
  }
  return ArcUnion(std::move(arcs));
}

ArcUnion random_dyadic_union(const BergmanTree& tree, Rng& rng, int count, int min_level, int max_level) {
  std::vector<Arc> arcs;
  for (int i = 0; i < count; ++i) arcs.push_back(tree.arc(random_node(rng, rng.between(min_level, max_level))));
  return ArcUnion(std::move(arcs));
}

}  // namespace treecap
