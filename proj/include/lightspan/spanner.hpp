#pragma once

#include <vector>

#include "lightspan/decomp.hpp"
#include "lightspan/metric.hpp"
#include "lightspan/nets.hpp"

namespace lightspan {

// Geometric scale ladder Delta_i = (1+eps)^i, i = 0..top_index, with
// top_index minimal such that (1+eps)^top_index >= L.
struct ScaleLadder {
  double eps = 0.1;
  int top_index = 0;
  std::vector<double> scales;
};

ScaleLadder scale_ladder(double eps, double L_or_Lambda);

// The exact stretch bound the stretch induction supports for given eps, t:
// alpha = 2(1+2eps)t / (1/(1+eps) - 2eps).
double effective_stretch(double eps, double t);

// Largest eps' (via bisection) whose effective stretch stays within the
// conventional t*(2+eps) budget.
double eps_for_target_stretch(double t, double eps_budget);

struct ScaleLog {
  int i = 0;
  double delta_i = 0.0;
  int n_i = 0;
  int phi = 0;
  int resample_rounds = 0;
  int edges_added = 0;
  double weight_added = 0.0;
};

struct SpannerEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

struct Spanner {
  int n = 0;
  std::vector<SpannerEdge> edges;
  std::vector<ScaleLog> build_log;
  // Graph mode only: the tree edges added per (scale, partition), recorded
  // before global dedup; each group is a forest.
  std::vector<std::vector<SpannerEdge>> partition_edge_groups;
};

// Algorithm: per scale i, cover the eps*Delta_i-net with a batch of
// (t*(1+2eps)*Delta_i)-bounded partitions and add a star inside every
// cluster, centered on the member of maximal net level.
Spanner build_spanner(const MetricSpace& space, const DecompositionScheme& scheme,
                      double eps, Rng& rng);

// Same construction with the per-scale covering batch sized for
// delta_i = n_i^{-beta}, i.e. phi_i = ceil(2 n_i^beta ln n_i).
Spanner build_spanner_subset_decomposable(const MetricSpace& space,
                                          const DecompositionScheme& scheme,
                                          double eps, double beta, Rng& rng);

// Graph variant: scales run to the aspect ratio, partitions are strong and
// over all vertices, and stars become shortest-path trees inside clusters,
// so every spanner edge is a graph edge.
Spanner build_graph_spanner(const MetricSpace& space,
                            const DecompositionScheme& strong_scheme, double eps,
                            Rng& rng);

}  // namespace lightspan
