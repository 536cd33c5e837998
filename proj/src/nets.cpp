#include "lightspan/nets.hpp"

#include <algorithm>
#include <numeric>

namespace lightspan {

namespace {

std::vector<int> full_domain(const MetricSpace& space) {
  std::vector<int> d(space.size());
  std::iota(d.begin(), d.end(), 0);
  return d;
}

}  // namespace

Net build_net_over(const MetricSpace& space, const std::vector<int>& domain,
                   double r, const std::vector<int>& seed_subset) {
  if (!(r > 0.0)) throw InvalidInputError("net radius must be positive");
  for (size_t a = 0; a < seed_subset.size(); ++a) {
    for (size_t b = a + 1; b < seed_subset.size(); ++b) {
      if (space.distance(seed_subset[a], seed_subset[b]) <= r) {
        throw InvalidInputError("seed subset violates net packing");
      }
    }
  }
  Net net;
  net.radius_r = r;
  net.members = seed_subset;
  for (int x : domain) {
    bool covered = false;
    for (int y : net.members) {
      if (space.distance(x, y) <= r) {
        covered = true;
        break;
      }
    }
    if (!covered) net.members.push_back(x);
  }
  std::sort(net.members.begin(), net.members.end());
  return net;
}

Net build_net(const MetricSpace& space, double r,
              const std::vector<int>& seed_subset) {
  return build_net_over(space, full_domain(space), r, seed_subset);
}

HierarchicalNet build_hierarchy(const MetricSpace& space,
                                const std::vector<double>& radii) {
  for (size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) {
      throw InvalidInputError("hierarchy radii must be strictly ascending");
    }
  }
  HierarchicalNet h;
  h.levels.resize(radii.size());
  std::vector<int> seed;
  for (int i = static_cast<int>(radii.size()) - 1; i >= 0; --i) {
    h.levels[i] = build_net(space, radii[i], seed);
    seed = h.levels[i].members;
  }
  h.max_level.assign(space.size(), -1);
  for (size_t i = 0; i < h.levels.size(); ++i) {
    for (int x : h.levels[i].members) h.max_level[x] = static_cast<int>(i);
  }
  return h;
}

int net_level(const HierarchicalNet& hierarchy, int x) {
  if (x < 0 || x >= static_cast<int>(hierarchy.max_level.size())) {
    throw InvalidInputError("net_level index out of range");
  }
  return hierarchy.max_level[x];
}

bool check_net_size_bound(const Net& net, double L) {
  return static_cast<double>(net.members.size()) <= 2.0 * L / net.radius_r;
}

bool check_net(const MetricSpace& space, const Net& net,
               const std::vector<int>& domain) {
  const std::vector<int> dom = domain.empty() ? [&] {
    std::vector<int> d(space.size());
    std::iota(d.begin(), d.end(), 0);
    return d;
  }() : domain;
  for (size_t a = 0; a < net.members.size(); ++a) {
    for (size_t b = a + 1; b < net.members.size(); ++b) {
      if (space.distance(net.members[a], net.members[b]) <= net.radius_r) {
        return false;
      }
    }
  }
  for (int x : dom) {
    bool covered = false;
    for (int y : net.members) {
      if (space.distance(x, y) <= net.radius_r) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace lightspan
