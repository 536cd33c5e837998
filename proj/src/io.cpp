#include "lightspan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace lightspan {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  return out;
}

double parse_finite(std::istringstream& is, const std::string& what) {
  double v;
  if (!(is >> v) || !std::isfinite(v)) {
    throw InvalidInputError("invalid " + what + " value");
  }
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

PointSet load_point_set(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("empty point file " + path);
  std::istringstream header(line);
  std::string ptag, dtag;
  double p;
  int d;
  if (!(header >> ptag >> p >> dtag >> d) || ptag != "p" || dtag != "d") {
    throw InvalidInputError("bad point file header in " + path);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row(d);
    for (int j = 0; j < d; ++j) row[j] = parse_finite(ls, "coordinate");
    double extra;
    if (ls >> extra) throw InvalidInputError("too many coordinates on a line");
    rows.push_back(std::move(row));
  }
  PointSet ps;
  ps.p = p;
  ps.points.resize(static_cast<int>(rows.size()), d);
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) ps.points(static_cast<int>(i), j) = rows[i][j];
  }
  return ps;
}

WeightedGraph load_graph(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("empty graph file " + path);
  std::istringstream header(line);
  std::string tag;
  int n;
  if (!(header >> tag >> n) || tag != "graph") {
    throw InvalidInputError("bad graph file header in " + path);
  }
  WeightedGraph g;
  g.n = n;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    GraphEdge e;
    if (!(ls >> e.u >> e.v)) throw InvalidInputError("bad edge line");
    e.w = parse_finite(ls, "edge weight");
    g.edges.push_back(e);
  }
  return g;
}

MetricSpace load_instance(const std::string& path) {
  auto in = open_input(path);
  std::string tag;
  in >> tag;
  in.close();
  if (tag == "graph") return MetricSpace::from_graph(load_graph(path));
  if (tag == "p") return MetricSpace::from_points(load_point_set(path));
  throw InvalidInputError("unrecognized instance header in " + path);
}

void save_point_set(const PointSet& ps, const std::string& path) {
  auto out = open_output(path);
  out << "p " << fmt(ps.p) << " d " << ps.dim() << '\n';
  for (int i = 0; i < ps.size(); ++i) {
    for (int j = 0; j < ps.dim(); ++j) {
      if (j) out << ' ';
      out << fmt(ps.points(i, j));
    }
    out << '\n';
  }
}

void save_graph(const WeightedGraph& g, const std::string& path) {
  auto out = open_output(path);
  out << "graph " << g.n << '\n';
  for (const auto& e : g.edges) {
    out << e.u << ' ' << e.v << ' ' << fmt(e.w) << '\n';
  }
}

void save_spanner_edges(const Spanner& spanner, double scale_factor,
                        const std::string& path) {
  auto out = open_output(path);
  for (const auto& e : spanner.edges) {
    out << e.u << ' ' << e.v << ' ' << fmt(e.w / scale_factor) << '\n';
  }
}

std::vector<SpannerEdge> load_spanner_edges(const std::string& path) {
  auto in = open_input(path);
  std::vector<SpannerEdge> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    SpannerEdge e;
    if (!(ls >> e.u >> e.v)) throw InvalidInputError("bad spanner edge line");
    e.w = parse_finite(ls, "spanner edge weight");
    edges.push_back(e);
  }
  return edges;
}

PointSet gen_gaussian(int n, int d, double p, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInputError("gen gaussian needs n, d >= 1");
  Rng rng = make_rng(seed, "gen-gaussian");
  std::normal_distribution<double> normal(0.0, 1.0);
  PointSet ps;
  ps.p = p;
  ps.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) ps.points(i, j) = normal(rng);
  }
  return ps;
}

PointSet gen_hypercube(int n, int d, double p, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InvalidInputError("gen hypercube needs n, d >= 1");
  Rng rng = make_rng(seed, "gen-hypercube");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  PointSet ps;
  ps.p = p;
  ps.points.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) ps.points(i, j) = unif(rng);
  }
  return ps;
}

WeightedGraph gen_grid(int k) {
  if (k < 1) throw InvalidInputError("gen grid needs k >= 1");
  WeightedGraph g;
  g.n = k * k;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      int v = r * k + c;
      if (c + 1 < k) g.edges.push_back({v, v + 1, 1.0});
      if (r + 1 < k) g.edges.push_back({v, v + k, 1.0});
    }
  }
  return g;
}

WeightedGraph gen_geometric_graph(int n, double radius, std::uint64_t seed) {
  if (n < 1 || !(radius > 0.0)) throw InvalidInputError("gen geometric-graph needs n >= 1 and radius > 0");
  Rng rng = make_rng(seed, "gen-geometric");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd pts(n, 2);
  for (int i = 0; i < n; ++i) {
    pts(i, 0) = unif(rng);
    pts(i, 1) = unif(rng);
  }
  WeightedGraph g;
  g.n = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = (pts.row(i) - pts.row(j)).norm();
      if (d <= radius && d > 0.0) g.edges.push_back({i, j, d});
    }
  }
  // Stitch components together via closest cross-component pairs so the
  // output is always a connected metric.
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (const auto& e : g.edges) uf[find(e.u)] = find(e.v);
  while (true) {
    int bu = -1, bv = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (find(i) == find(j)) continue;
        double d = (pts.row(i) - pts.row(j)).norm();
        if (d < best) {
          best = d;
          bu = i;
          bv = j;
        }
      }
    }
    if (bu < 0) break;
    g.edges.push_back({bu, bv, best});
    uf[find(bu)] = find(bv);
  }
  return g;
}

}  // namespace lightspan
