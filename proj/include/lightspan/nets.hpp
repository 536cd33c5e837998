#pragma once

#include <vector>

#include "lightspan/metric.hpp"

namespace lightspan {

// r-net: members pairwise farther than r (packing) and every point of the
// domain within r of some member (covering).
struct Net {
  double radius_r = 0.0;
  std::vector<int> members;  // sorted ascending
};

// Nested nets N_1 >= ... >= N_s at strictly increasing radii. levels[0] is
// the finest. max_level[x] is the largest level index containing x, -1 if none.
struct HierarchicalNet {
  std::vector<Net> levels;
  std::vector<int> max_level;
};

// Greedy net over `domain` (default: all points), ascending index order,
// optionally seeded with a packing-feasible subset.
Net build_net(const MetricSpace& space, double r,
              const std::vector<int>& seed_subset = {});
Net build_net_over(const MetricSpace& space, const std::vector<int>& domain,
                   double r, const std::vector<int>& seed_subset = {});

// Top-down construction: the coarsest net first, each finer level seeded by
// the level above, so nesting holds by construction.
HierarchicalNet build_hierarchy(const MetricSpace& space,
                                const std::vector<double>& radii);

int net_level(const HierarchicalNet& hierarchy, int x);

// Claim: an r-net of a space with MST weight L has at most 2L/r members.
bool check_net_size_bound(const Net& net, double L);

// Exhaustive O(n * |N|) verification of both net invariants.
bool check_net(const MetricSpace& space, const Net& net,
               const std::vector<int>& domain = {});

}  // namespace lightspan
