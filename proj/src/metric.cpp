#include "lightspan/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace lightspan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_points(const PointSet& ps) {
  if (ps.size() < 1 || ps.dim() < 1) {
    throw InvalidInputError("point set must have n >= 1 and d >= 1");
  }
  if (ps.p < 1.0 || ps.p > 2.0) {
    throw InvalidInputError("norm exponent p must lie in [1, 2]");
  }
  if (!ps.points.allFinite()) {
    throw InvalidInputError("point coordinates must be finite");
  }
  for (int i = 0; i < ps.size(); ++i) {
    for (int j = i + 1; j < ps.size(); ++j) {
      if ((ps.points.row(i) - ps.points.row(j)).cwiseAbs().maxCoeff() == 0.0) {
        throw InvalidInputError("duplicate points at indices " +
                                std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }
}

void validate_graph(const WeightedGraph& g) {
  if (g.n < 1) throw InvalidInputError("graph must have n >= 1 vertices");
  std::vector<std::pair<int, int>> seen;
  seen.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.u >= g.n || e.v < 0 || e.v >= g.n) {
      throw InvalidInputError("edge endpoint out of range");
    }
    if (e.u == e.v) throw InvalidInputError("self-loop edge");
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw InvalidInputError("edge weights must be positive and finite");
    }
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw InvalidInputError("duplicate undirected edge");
  }
}

double lp_distance(const PointSet& ps, int i, int j) {
  if (ps.p == 2.0) return (ps.points.row(i) - ps.points.row(j)).norm();
  if (ps.p == 1.0) return (ps.points.row(i) - ps.points.row(j)).cwiseAbs().sum();
  const Eigen::ArrayXd diff =
      (ps.points.row(i) - ps.points.row(j)).cwiseAbs().transpose().array();
  return std::pow(diff.pow(ps.p).sum(), 1.0 / ps.p);
}

}  // namespace

std::vector<double> dijkstra(
    const std::vector<std::vector<std::pair<int, double>>>& adj, int source,
    std::vector<int>* parent) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> dist(n, kInf);
  if (parent) parent->assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[source] = 0.0;
  pq.emplace(0.0, source);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u]) {
      if (d + w < dist[v]) {
        dist[v] = d + w;
        if (parent) (*parent)[v] = u;
        pq.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

MetricSpace MetricSpace::from_points(PointSet ps) {
  validate_points(ps);
  MetricSpace m;
  m.n_ = ps.size();
  m.points_ = std::move(ps);
  return m;
}

MetricSpace MetricSpace::from_graph(WeightedGraph g) {
  validate_graph(g);
  MetricSpace m;
  m.n_ = g.n;
  m.adj_.assign(g.n, {});
  for (const auto& e : g.edges) {
    m.adj_[e.u].emplace_back(e.v, e.w);
    m.adj_[e.v].emplace_back(e.u, e.w);
  }
  if (g.n <= 4096) {
    auto apsp = std::make_shared<Eigen::MatrixXd>(g.n, g.n);
    for (int s = 0; s < g.n; ++s) {
      auto d = dijkstra(m.adj_, s);
      for (int v = 0; v < g.n; ++v) {
        if (d[v] == kInf) throw InvalidInputError("graph is not connected");
        (*apsp)(s, v) = d[v];
      }
    }
    m.apsp_ = std::move(apsp);
  }
  m.graph_ = std::move(g);
  return m;
}

double MetricSpace::raw_distance(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) {
    throw InvalidInputError("point index out of range");
  }
  if (i == j) return 0.0;
  // Canonical argument order keeps d(i,j) bitwise equal to d(j,i): the
  // graph APSP rows come from independent Dijkstra runs whose float
  // summation order differs between sources.
  if (i > j) std::swap(i, j);
  if (points_) return lp_distance(*points_, i, j);
  if (apsp_) return (*apsp_)(i, j);
  auto d = dijkstra(adj_, i);
  if (d[j] == kInf) throw InvalidInputError("graph is not connected");
  return d[j];
}

double MetricSpace::distance(int i, int j) const {
  return raw_distance(i, j) * scale_;
}

const PointSet& MetricSpace::points() const {
  if (!points_) throw InvalidInputError("metric space has no point backing");
  return *points_;
}

const WeightedGraph& MetricSpace::graph() const {
  if (!graph_) throw InvalidInputError("metric space has no graph backing");
  return *graph_;
}

const std::vector<std::vector<std::pair<int, double>>>& MetricSpace::adjacency()
    const {
  if (!graph_) throw InvalidInputError("metric space has no graph backing");
  return adj_;
}

double MetricSpace::min_raw_distance() const {
  if (n_ < 2) throw InvalidInputError("need n >= 2 for a minimum distance");
  if (graph_) {
    // Min shortest-path distance equals the min edge weight.
    double m = kInf;
    for (const auto& e : graph_->edges) m = std::min(m, e.w);
    if (m == kInf) throw InvalidInputError("connected graph with n >= 2 has edges");
    return m;
  }
  double m = kInf;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) m = std::min(m, raw_distance(i, j));
  }
  return m;
}

MetricSpace normalize(const MetricSpace& space) {
  const double m = space.min_raw_distance();
  if (!(m > 0.0)) throw InvalidInputError("zero minimum distance");
  MetricSpace out = space;
  out.scale_ = 1.0 / m;
  return out;
}

MstSummary mst(const MetricSpace& space) {
  const int n = space.size();
  MstSummary out;
  if (n <= 1) return out;

  if (space.is_points()) {
    // Dense Prim over the complete metric graph.
    std::vector<double> key(n, kInf);
    std::vector<int> to(n, -1);
    std::vector<bool> in(n, false);
    key[0] = 0.0;
    for (int it = 0; it < n; ++it) {
      int u = -1;
      for (int v = 0; v < n; ++v) {
        if (!in[v] && (u == -1 || key[v] < key[u])) u = v;
      }
      in[u] = true;
      if (to[u] >= 0) {
        int a = std::min(u, to[u]), b = std::max(u, to[u]);
        out.tree_edges.push_back({a, b, key[u]});
        out.weight_L += key[u];
      }
      for (int v = 0; v < n; ++v) {
        if (in[v]) continue;
        double d = space.distance(u, v);
        // Tie-break by lexicographic (attaching vertex, frontier vertex).
        if (d < key[v] ||
            (d == key[v] && to[v] >= 0 &&
             std::make_pair(std::min(u, v), std::max(u, v)) <
                 std::make_pair(std::min(to[v], v), std::max(to[v], v)))) {
          key[v] = d;
          to[v] = u;
        }
      }
    }
    std::sort(out.tree_edges.begin(), out.tree_edges.end(),
              [](const GraphEdge& a, const GraphEdge& b) {
                return std::tie(a.u, a.v) < std::tie(b.u, b.v);
              });
    return out;
  }

  // Graph backing: Kruskal over the edge list with (w, u, v) ordering.
  // MST edges of a connected graph realize their shortest-path distances,
  // so this is also the MST of the normalized metric.
  std::vector<GraphEdge> edges = space.graph().edges;
  for (auto& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    e.w *= space.scale_factor();
  }
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : edges) {
    int a = find(e.u), b = find(e.v);
    if (a == b) continue;
    uf[a] = b;
    out.tree_edges.push_back(e);
    out.weight_L += e.w;
  }
  if (static_cast<int>(out.tree_edges.size()) != n - 1) {
    throw InvalidInputError("graph is not connected");
  }
  std::sort(out.tree_edges.begin(), out.tree_edges.end(),
            [](const GraphEdge& a, const GraphEdge& b) {
              return std::tie(a.u, a.v) < std::tie(b.u, b.v);
            });
  return out;
}

double aspect_ratio(const WeightedGraph& graph) {
  if (graph.edges.empty()) throw InvalidInputError("aspect ratio of an edgeless graph");
  double lo = kInf, hi = 0.0;
  for (const auto& e : graph.edges) {
    lo = std::min(lo, e.w);
    hi = std::max(hi, e.w);
  }
  return hi / lo;
}

}  // namespace lightspan
