#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "lightspan/io.hpp"
#include "lightspan/metric.hpp"

using namespace lightspan;
using namespace lightspan::testing;

namespace {

MetricSpace points_1d(std::initializer_list<double> xs, double p = 2.0) {
  PointSet ps;
  ps.p = p;
  ps.points.resize(static_cast<int>(xs.size()), 1);
  int i = 0;
  for (double x : xs) ps.points(i++, 0) = x;
  return MetricSpace::from_points(std::move(ps));
}

}  // namespace

TEST_CASE("lp distances") {
  PointSet ps;
  ps.p = 2.0;
  ps.points.resize(2, 2);
  ps.points << 0, 0, 3, 4;
  auto space = MetricSpace::from_points(ps);
  CHECK(space.distance(0, 1) == doctest::Approx(5.0));
  CHECK(space.distance(0, 0) == 0.0);
  CHECK(space.distance(1, 1) == 0.0);

  ps.p = 1.5;
  ps.points << 0, 0, 1, 1;
  auto space15 = MetricSpace::from_points(ps);
  CHECK(space15.distance(0, 1) == doctest::Approx(std::pow(2.0, 2.0 / 3.0)));

  CHECK_THROWS_AS(space.distance(0, 2), InvalidInputError);
}

TEST_CASE("normalize") {
  auto space = normalize(points_1d({0, 2, 10}));
  CHECK(space.scale_factor() == doctest::Approx(0.5));
  CHECK(space.distance(0, 1) == doctest::Approx(1.0));
  CHECK(space.distance(1, 2) == doctest::Approx(4.0));
  CHECK(space.distance(0, 2) == doctest::Approx(5.0));

  auto again = normalize(space);
  CHECK(again.scale_factor() == doctest::Approx(0.5));

  // Path graph with weights {3, 7}: min pairwise shortest-path is 3.
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1, 3.0}, {1, 2, 7.0}};
  auto gs = normalize(MetricSpace::from_graph(g));
  CHECK(gs.scale_factor() == doctest::Approx(1.0 / 3.0));
  double mn = std::min({gs.distance(0, 1), gs.distance(1, 2), gs.distance(0, 2)});
  CHECK(mn == doctest::Approx(1.0));
}

TEST_CASE("duplicate points rejected at ingestion") {
  PointSet ps;
  ps.p = 2.0;
  ps.points.resize(2, 2);
  ps.points << 1, 2, 1, 2;
  CHECK_THROWS_AS(MetricSpace::from_points(ps), InvalidInputError);
}

TEST_CASE("graph invariants rejected") {
  WeightedGraph g;
  g.n = 2;
  g.edges = {{0, 0, 1.0}};
  CHECK_THROWS_AS(MetricSpace::from_graph(g), InvalidInputError);
  g.edges = {{0, 1, -1.0}};
  CHECK_THROWS_AS(MetricSpace::from_graph(g), InvalidInputError);
  g.edges = {{0, 1, 1.0}, {1, 0, 2.0}};
  CHECK_THROWS_AS(MetricSpace::from_graph(g), InvalidInputError);
  g.n = 3;
  g.edges = {{0, 1, 1.0}};
  CHECK_THROWS_AS(MetricSpace::from_graph(g), InvalidInputError);  // disconnected
}

TEST_CASE("mst examples") {
  PointSet square;
  square.p = 2.0;
  square.points.resize(4, 2);
  square.points << 0, 0, 1, 0, 0, 1, 1, 1;
  auto sq = normalize(MetricSpace::from_points(square));
  auto tree = mst(sq);
  CHECK(tree.tree_edges.size() == 3);
  CHECK(tree.weight_L == doctest::Approx(3.0));

  auto two = normalize(points_1d({0, 5}));
  CHECK(mst(two).weight_L == doctest::Approx(5.0 * two.scale_factor()));
  CHECK(mst(two).tree_edges.size() == 1);

  auto ten = gaussian_space(10, 2, 2.0, 77);
  CHECK(mst(ten).weight_L ==
        doctest::Approx(kruskal_metric_mst_weight(ten)).epsilon(1e-12));
}

TEST_CASE("mst edge weights equal metric distances") {
  for (int idx : {0, 1, 2, 3, 7}) {
    auto space = corpus_space(idx);
    auto tree = mst(space);
    REQUIRE(tree.tree_edges.size() == static_cast<size_t>(space.size() - 1));
    double total = 0.0;
    for (const auto& e : tree.tree_edges) {
      CHECK(e.w == doctest::Approx(space.distance(e.u, e.v)).epsilon(1e-9));
      total += e.w;
    }
    CHECK(tree.weight_L == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("prim equals kruskal oracle on 100 instances") {
  for (int idx = 0; idx < 100; ++idx) {
    auto space = corpus_space(idx);
    CHECK(mst(space).weight_L ==
          doctest::Approx(kruskal_metric_mst_weight(space)).epsilon(1e-12));
  }
}

TEST_CASE("aspect ratio") {
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  CHECK(aspect_ratio(g) == doctest::Approx(1.0));
  g.edges = {{0, 1, 1.0}, {1, 2, 8.0}};
  CHECK(aspect_ratio(g) == doctest::Approx(8.0));

  Rng rng(5);
  std::uniform_real_distribution<double> unif(1.0, 100.0);
  WeightedGraph r;
  r.n = 20;
  double mn = 1e18, mx = 0;
  for (int i = 1; i < r.n; ++i) {
    double w = unif(rng);
    r.edges.push_back({i - 1, i, w});
    mn = std::min(mn, w);
    mx = std::max(mx, w);
  }
  CHECK(aspect_ratio(r) == doctest::Approx(mx / mn));
  WeightedGraph empty;
  empty.n = 1;
  CHECK_THROWS_AS(aspect_ratio(empty), InvalidInputError);
}

TEST_CASE("metric axioms on random instances") {
  Rng rng(99);
  for (int idx = 0; idx < 100; ++idx) {
    auto space = corpus_space(idx);
    std::uniform_int_distribution<int> pick(0, space.size() - 1);
    for (int rep = 0; rep < 20; ++rep) {
      int i = pick(rng), j = pick(rng), k = pick(rng);
      CHECK(space.distance(i, j) == space.distance(j, i));
      CHECK(space.distance(i, i) == 0.0);
      if (i != j) CHECK(space.distance(i, j) > 0.0);
      CHECK(space.distance(i, k) <=
            (space.distance(i, j) + space.distance(j, k)) * (1.0 + 1e-9) + 1e-12);
    }
    // Normalized minimum distance is exactly 1 up to roundoff.
    double mn = 1e300;
    for (int i = 0; i < space.size(); ++i) {
      for (int j = i + 1; j < space.size(); ++j) {
        mn = std::min(mn, space.distance(i, j));
      }
    }
    CHECK(mn >= 1.0 - 1e-12);
    CHECK(mn <= 1.0 + 1e-12);
  }
}

TEST_CASE("instance file round trip and rejection") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "lightspan_test_io";
  fs::create_directories(dir);

  auto ps = gen_gaussian(7, 3, 1.5, 11);
  const auto ppath = (dir / "pts.txt").string();
  save_point_set(ps, ppath);
  auto back = load_point_set(ppath);
  CHECK(back.p == ps.p);
  CHECK((back.points - ps.points).cwiseAbs().maxCoeff() == 0.0);

  auto g = gen_geometric_graph(12, 0.4, 3);
  const auto gpath = (dir / "graph.txt").string();
  save_graph(g, gpath);
  auto gback = load_graph(gpath);
  CHECK(gback.n == g.n);
  REQUIRE(gback.edges.size() == g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(gback.edges[i].w == g.edges[i].w);
  }

  const auto bad = (dir / "bad.txt").string();
  std::ofstream(bad) << "p 2 d 2\n0 0\nnan 1\n";
  CHECK_THROWS_AS(load_point_set(bad), InvalidInputError);
  std::ofstream(bad) << "graph 2\n0 1 inf\n";
  CHECK_THROWS_AS(load_graph(bad), InvalidInputError);
}
