#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "lightspan/common.hpp"

namespace lightspan {

// Finite subset of l_p, one point per row. 1 <= p <= 2.
struct PointSet {
  Eigen::MatrixXd points;
  double p = 2.0;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }
};

struct GraphEdge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Connected undirected graph with positive edge weights.
struct WeightedGraph {
  int n = 0;
  std::vector<GraphEdge> edges;
};

// Unified distance oracle over a point set or a graph shortest-path metric.
// scale_factor() multiplies raw backing distances so that after normalize()
// the minimum pairwise distance is exactly 1. Immutable once built.
class MetricSpace {
 public:
  static MetricSpace from_points(PointSet ps);
  static MetricSpace from_graph(WeightedGraph g);

  int size() const { return n_; }
  double scale_factor() const { return scale_; }

  // Normalized metric distance (raw distance times scale_factor).
  double distance(int i, int j) const;
  // Raw backing distance, before normalization.
  double raw_distance(int i, int j) const;

  bool is_points() const { return points_.has_value(); }
  bool is_graph() const { return graph_.has_value(); }
  bool is_euclidean() const { return is_points() && points_->p == 2.0; }

  const PointSet& points() const;
  const WeightedGraph& graph() const;

  // Adjacency of the graph backing: per-vertex list of (neighbor, raw weight).
  const std::vector<std::vector<std::pair<int, double>>>& adjacency() const;

  double min_raw_distance() const;

 private:
  MetricSpace() = default;

  int n_ = 0;
  double scale_ = 1.0;
  std::optional<PointSet> points_;
  std::optional<WeightedGraph> graph_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
  // Cached all-pairs shortest paths (raw weights), built when n <= 4096.
  std::shared_ptr<Eigen::MatrixXd> apsp_;

  friend MetricSpace normalize(const MetricSpace& space);
};

struct MstSummary {
  std::vector<GraphEdge> tree_edges;  // weights in the normalized metric
  double weight_L = 0.0;
};

// Rescales so the minimum pairwise distance is exactly 1. Requires n >= 2.
MetricSpace normalize(const MetricSpace& space);

// Exact MST: dense Prim over the complete metric graph for point sets,
// Prim over the edge list for graphs. Deterministic tie-breaking.
MstSummary mst(const MetricSpace& space);

// max edge weight / min edge weight.
double aspect_ratio(const WeightedGraph& graph);

// Dijkstra from `source` over an adjacency list; returns distances
// (infinity where unreachable) and optionally parents.
std::vector<double> dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adj, int source,
    std::vector<int>* parent = nullptr);

}  // namespace lightspan
