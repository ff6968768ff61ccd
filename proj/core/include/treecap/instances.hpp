#pragma once

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"
#include "treecap/random.hpp"

namespace treecap {

/// Minimal elements of `draws` uniformly chosen nodes with levels in [min_level, max_level].
StoppingTime random_stopping_time(const BergmanTree& tree, Rng& rng, int draws, int min_level, int max_level);

/// A few deep nodes below one anchor: small capacity, used where a smallness proviso applies.
StoppingTime random_clustered_stopping_time(const BergmanTree& tree, Rng& rng, int anchor_level, int count);

/// Random condenser pair (E, F) with F strictly below E.
std::pair<StoppingTime, StoppingTime> random_condenser(const BergmanTree& tree, Rng& rng, int draws);

/// Up to `max_components` arcs with log-uniform lengths in [min_len, max_len].
ArcUnion random_arc_union(Rng& rng, int max_components, double min_len, double max_len);

/// Union of `count` random node arcs at levels in [min_level, max_level].
ArcUnion random_dyadic_union(const BergmanTree& tree, Rng& rng, int count, int min_level, int max_level);

}  // namespace treecap
