#include "lightspan/spanner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace lightspan {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.125)) {
    throw InvalidInputError("eps must lie in (0, 1/8)");
  }
}

// Center choice matching the sparsity charging argument: maximal net level,
// ties to the smallest index.
int pick_center(const HierarchicalNet& hierarchy, const std::vector<int>& cluster) {
  int best = cluster.front();
  for (int x : cluster) {
    if (hierarchy.max_level[x] > hierarchy.max_level[best] ||
        (hierarchy.max_level[x] == hierarchy.max_level[best] && x < best)) {
      best = x;
    }
  }
  return best;
}

HierarchicalNet spanner_hierarchy(const MetricSpace& space, const ScaleLadder& ladder,
                                  double eps) {
  std::vector<double> radii(ladder.scales.size());
  for (size_t i = 0; i < radii.size(); ++i) radii[i] = eps * ladder.scales[i];
  return build_hierarchy(space, radii);
}

using DeltaOverride = std::function<std::optional<double>(int)>;

Spanner build_point_spanner(const MetricSpace& space,
                            const DecompositionScheme& scheme, double eps,
                            Rng& rng, const DeltaOverride& delta_for) {
  check_eps(eps);
  if (!scheme.supports(space)) {
    throw InvalidInputError("scheme '" + scheme.name() +
                            "' does not support this metric backing");
  }
  Spanner h;
  h.n = space.size();
  if (h.n <= 1) return h;

  const double L = std::max(mst(space).weight_L, 1.0);
  const ScaleLadder ladder = scale_ladder(eps, L);
  const HierarchicalNet hierarchy = spanner_hierarchy(space, ladder, eps);

  std::set<std::pair<int, int>> seen;
  for (int i = 0; i <= ladder.top_index; ++i) {
    const auto& domain = hierarchy.levels[i].members;
    ScaleLog log;
    log.i = i;
    log.delta_i = ladder.scales[i];
    log.n_i = static_cast<int>(domain.size());
    if (domain.size() >= 2) {
      const double delta_scale = (1.0 + 2.0 * eps) * ladder.scales[i];
      CoveringBatch batch;
      try {
        batch = covering_partitions(scheme, space, domain, domain, delta_scale,
                                    rng, delta_for(log.n_i));
      } catch (const CapExceededError& e) {
        throw CapExceededError("scale " + std::to_string(i) + ": " + e.what());
      }
      log.phi = batch.phi;
      log.resample_rounds = batch.resample_rounds;
      for (const auto& partition : batch.partitions) {
        for (const auto& cluster : partition.clusters) {
          if (cluster.size() < 2) continue;
          const int center = pick_center(hierarchy, cluster);
          for (int x : cluster) {
            if (x == center) continue;
            auto key = std::minmax(x, center);
            if (!seen.insert(key).second) continue;
            const double w = space.distance(x, center);
            h.edges.push_back({key.first, key.second, w});
            ++log.edges_added;
            log.weight_added += w;
          }
        }
      }
    }
    h.build_log.push_back(log);
  }
  return h;
}

}  // namespace

ScaleLadder scale_ladder(double eps, double L_or_Lambda) {
  check_eps(eps);
  if (!(L_or_Lambda >= 1.0)) throw InvalidInputError("scale ladder needs L >= 1");
  ScaleLadder ladder;
  ladder.eps = eps;
  int top = static_cast<int>(std::ceil(std::log(L_or_Lambda) / std::log1p(eps)));
  top = std::max(top, 0);
  while (top > 0 && std::pow(1.0 + eps, top - 1) >= L_or_Lambda) --top;
  while (std::pow(1.0 + eps, top) < L_or_Lambda) ++top;
  ladder.top_index = top;
  ladder.scales.resize(top + 1);
  for (int i = 0; i <= top; ++i) ladder.scales[i] = std::pow(1.0 + eps, i);
  return ladder;
}

double effective_stretch(double eps, double t) {
  check_eps(eps);
  const double denom = 1.0 / (1.0 + eps) - 2.0 * eps;
  return 2.0 * (1.0 + 2.0 * eps) * t / denom;
}

double eps_for_target_stretch(double t, double eps_budget) {
  if (!(eps_budget > 0.0)) throw InvalidInputError("stretch budget must be positive");
  const double target = t * (2.0 + eps_budget);
  double lo = 0.0, hi = 0.125 - 1e-12;
  if (effective_stretch(hi, t) <= target) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (effective_stretch(mid, t) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo <= 0.0) throw InvalidInputError("no eps in (0, 1/8) meets the stretch budget");
  return lo;
}

Spanner build_spanner(const MetricSpace& space, const DecompositionScheme& scheme,
                      double eps, Rng& rng) {
  return build_point_spanner(space, scheme, eps, rng,
                             [](int) { return std::optional<double>{}; });
}

Spanner build_spanner_subset_decomposable(const MetricSpace& space,
                                          const DecompositionScheme& scheme,
                                          double eps, double beta, Rng& rng) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidInputError("beta must lie in (0, 1)");
  return build_point_spanner(space, scheme, eps, rng, [beta](int n_i) {
    return std::optional<double>(std::pow(static_cast<double>(n_i), -beta));
  });
}

Spanner build_graph_spanner(const MetricSpace& space,
                            const DecompositionScheme& strong_scheme, double eps,
                            Rng& rng) {
  check_eps(eps);
  if (!space.is_graph()) throw InvalidInputError("graph spanner needs a graph backing");
  if (!strong_scheme.supports(space)) {
    throw InvalidInputError("graph spanner needs a strong graph scheme");
  }
  Spanner h;
  h.n = space.size();
  if (h.n <= 1) return h;

  const double lambda = aspect_ratio(space.graph());
  const ScaleLadder ladder = scale_ladder(eps, std::max(lambda, 1.0));
  const HierarchicalNet hierarchy = spanner_hierarchy(space, ladder, eps);

  std::vector<int> all_vertices(space.size());
  for (int v = 0; v < space.size(); ++v) all_vertices[v] = v;
  const auto& adj = space.adjacency();

  auto edge_weight = [&](int u, int v) {
    for (auto [nb, w] : adj[u]) {
      if (nb == v) return w * space.scale_factor();
    }
    throw VerificationError("missing graph edge on a shortest-path tree");
  };

  std::set<std::pair<int, int>> seen;
  for (int i = 0; i <= ladder.top_index; ++i) {
    const auto& net_points = hierarchy.levels[i].members;
    ScaleLog log;
    log.i = i;
    log.delta_i = ladder.scales[i];
    log.n_i = static_cast<int>(net_points.size());
    if (net_points.size() >= 2) {
      const double delta_scale = (1.0 + 2.0 * eps) * ladder.scales[i];
      CoveringBatch batch;
      try {
        batch = covering_partitions(strong_scheme, space, all_vertices, net_points,
                                    delta_scale, rng);
      } catch (const CapExceededError& e) {
        throw CapExceededError("scale " + std::to_string(i) + ": " + e.what());
      }
      log.phi = batch.phi;
      log.resample_rounds = batch.resample_rounds;
      for (const auto& partition : batch.partitions) {
        std::vector<SpannerEdge> group;
        for (const auto& cluster : partition.clusters) {
          std::vector<int> nets_in_cluster;
          for (int x : cluster) {
            if (hierarchy.max_level[x] >= i) nets_in_cluster.push_back(x);
          }
          if (nets_in_cluster.size() < 2) continue;
          const int center = pick_center(hierarchy, nets_in_cluster);

          // Shortest-path tree in the induced subgraph G[P].
          std::map<int, int> local;
          for (size_t a = 0; a < cluster.size(); ++a) local[cluster[a]] = static_cast<int>(a);
          std::vector<std::vector<std::pair<int, double>>> sub(cluster.size());
          for (size_t a = 0; a < cluster.size(); ++a) {
            for (auto [v, w] : adj[cluster[a]]) {
              auto it = local.find(v);
              if (it != local.end()) sub[a].emplace_back(it->second, w);
            }
          }
          std::vector<int> parent;
          auto dist = dijkstra(sub, local[center], &parent);

          std::vector<bool> on_tree(cluster.size(), false);
          on_tree[local[center]] = true;
          for (int x : nets_in_cluster) {
            int cur = local[x];
            if (dist[cur] == std::numeric_limits<double>::infinity()) {
              throw VerificationError(
                  "net point disconnected from its cluster center in G[P]; "
                  "the strong scheme produced a disconnected cluster");
            }
            while (!on_tree[cur]) {
              on_tree[cur] = true;
              const int par = parent[cur];
              const int gu = cluster[par], gv = cluster[cur];
              auto key = std::minmax(gu, gv);
              const double w = edge_weight(gu, gv);
              group.push_back({key.first, key.second, w});
              if (seen.insert(key).second) {
                h.edges.push_back({key.first, key.second, w});
                ++log.edges_added;
                log.weight_added += w;
              }
              cur = par;
            }
          }
        }
        h.partition_edge_groups.push_back(std::move(group));
      }
    }
    h.build_log.push_back(log);
  }
  return h;
}

}  // namespace lightspan
