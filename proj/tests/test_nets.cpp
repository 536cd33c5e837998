#include <doctest.h>

#include "helpers.hpp"
#include "lightspan/nets.hpp"

using namespace lightspan;
using namespace lightspan::testing;

namespace {

MetricSpace line10() {
  PointSet ps;
  ps.p = 2.0;
  ps.points.resize(10, 1);
  for (int i = 0; i < 10; ++i) ps.points(i, 0) = i;
  return normalize(MetricSpace::from_points(std::move(ps)));
}

}  // namespace

TEST_CASE("greedy net on the unit line") {
  auto space = line10();
  auto net = build_net(space, 2.5);
  CHECK(net.members == std::vector<int>{0, 3, 6, 9});
  CHECK(check_net(space, net));

  // r below the minimum distance keeps every point.
  auto all = build_net(space, 0.5);
  CHECK(all.members.size() == 10);
  CHECK(check_net(space, all));
}

TEST_CASE("single point net") {
  PointSet ps;
  ps.p = 2.0;
  ps.points.resize(1, 1);
  ps.points(0, 0) = 42.0;
  auto space = MetricSpace::from_points(std::move(ps));
  auto net = build_net(space, 3.0);
  CHECK(net.members == std::vector<int>{0});
}

TEST_CASE("seed subset must pack") {
  auto space = line10();
  CHECK_THROWS_AS(build_net(space, 2.5, {0, 1}), InvalidInputError);
  auto net = build_net(space, 2.5, {0, 9});
  CHECK(check_net(space, net));
}

TEST_CASE("hierarchy nesting and degenerate cases") {
  auto space = line10();

  auto wide = build_hierarchy(space, {0.5, 100.0});
  CHECK(wide.levels[1].members.size() == 1);
  CHECK(wide.levels[0].members.size() == 10);

  auto single = build_hierarchy(space, {2.5});
  CHECK(single.levels[0].members == build_net(space, 2.5).members);

  CHECK_THROWS_AS(build_hierarchy(space, {2.0, 2.0}), InvalidInputError);

  auto planar = gaussian_space(20, 2, 2.0, 9);
  auto h = build_hierarchy(planar, {1.0, 2.0, 4.0, 8.0});
  for (size_t i = 0; i < h.levels.size(); ++i) {
    CHECK(check_net(planar, h.levels[i]));
    if (i + 1 < h.levels.size()) {
      for (int x : h.levels[i + 1].members) {
        CHECK(std::binary_search(h.levels[i].members.begin(),
                                 h.levels[i].members.end(), x));
      }
    }
  }
}

TEST_CASE("net_level agrees with a linear scan") {
  auto space = gaussian_space(30, 3, 2.0, 21);
  auto h = build_hierarchy(space, {1.0, 3.0, 9.0});
  CHECK(net_level(h, h.levels.back().members.front()) ==
        static_cast<int>(h.levels.size()) - 1);
  for (int x = 0; x < space.size(); ++x) {
    int expect = -1;
    for (size_t i = 0; i < h.levels.size(); ++i) {
      if (std::binary_search(h.levels[i].members.begin(),
                             h.levels[i].members.end(), x)) {
        expect = static_cast<int>(i);
      }
    }
    CHECK(net_level(h, x) == expect);
  }
}

TEST_CASE("net size bound examples") {
  auto space = line10();
  double L = mst(space).weight_L;
  CHECK(L == doctest::Approx(9.0));
  auto net = build_net(space, 2.5);
  CHECK(net.members.size() == 4);
  CHECK(check_net_size_bound(net, L));

  PointSet two;
  two.p = 2.0;
  two.points.resize(2, 1);
  two.points << 0, 1;
  auto pair = normalize(MetricSpace::from_points(std::move(two)));
  auto halfnet = build_net(pair, 0.5);
  CHECK(halfnet.members.size() == 2);
  CHECK(check_net_size_bound(halfnet, mst(pair).weight_L));
}

TEST_CASE("net theorems over the random corpus") {
  Rng rng(7);
  std::uniform_real_distribution<double> radius(0.3, 6.0);
  for (int idx = 0; idx < 100; ++idx) {
    auto space = corpus_space(idx);
    double L = mst(space).weight_L;
    double r = radius(rng);
    auto net = build_net(space, r);
    CHECK(check_net(space, net));
    if (space.size() >= 2) CHECK(check_net_size_bound(net, L));
    // Determinism.
    CHECK(build_net(space, r).members == net.members);
  }
}
