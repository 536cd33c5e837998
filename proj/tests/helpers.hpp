#pragma once

#include <vector>

#include "lightspan/io.hpp"
#include "lightspan/metric.hpp"

namespace lightspan::testing {

inline MetricSpace gaussian_space(int n, int d, double p, std::uint64_t seed) {
  return normalize(MetricSpace::from_points(gen_gaussian(n, d, p, seed)));
}

inline MetricSpace grid_space(int k) {
  return normalize(MetricSpace::from_graph(gen_grid(k)));
}

inline MetricSpace geometric_space(int n, double radius, std::uint64_t seed) {
  return normalize(MetricSpace::from_graph(gen_geometric_graph(n, radius, seed)));
}

// Mixed corpus: point sets and graphs, deterministic per index.
inline MetricSpace corpus_space(int index) {
  switch (index % 4) {
    case 0:
      return gaussian_space(8 + index % 40, 1 + index % 5, 2.0, 1000 + index);
    case 1:
      return gaussian_space(8 + index % 40, 2 + index % 4, 1.5, 2000 + index);
    case 2:
      return geometric_space(10 + index % 30, 0.35, 3000 + index);
    default:
      return grid_space(2 + index % 5);
  }
}

// Independent Kruskal over an explicit edge list; the MST oracle.
inline double kruskal_weight(int n, std::vector<GraphEdge> edges) {
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  double total = 0.0;
  for (const auto& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a == b) continue;
    uf[a] = b;
    total += e.w;
  }
  return total;
}

inline double kruskal_metric_mst_weight(const MetricSpace& space) {
  std::vector<GraphEdge> edges;
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      edges.push_back({i, j, space.distance(i, j)});
    }
  }
  return kruskal_weight(space.size(), std::move(edges));
}

}  // namespace lightspan::testing
