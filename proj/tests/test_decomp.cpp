#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "lightspan/decomp.hpp"

using namespace lightspan;
using namespace lightspan::testing;

namespace {

std::vector<int> all_of(const MetricSpace& space) {
  std::vector<int> d(space.size());
  std::iota(d.begin(), d.end(), 0);
  return d;
}

// Puts the whole domain in one cluster; valid whenever diam <= t*Delta.
class OneClusterScheme : public DecompositionScheme {
 public:
  explicit OneClusterScheme(double t) : DecompositionScheme({t, 1.0}) {}
  std::string name() const override { return "one-cluster"; }
  bool supports(const MetricSpace&) const override { return true; }
  Partition sample(const MetricSpace&, const std::vector<int>& domain, double,
                   Rng&) const override {
    return Partition::from_assignment(domain, std::vector<int>(domain.size(), 0));
  }
};

MetricSpace pair_space(double gap) {
  PointSet ps;
  ps.p = 2.0;
  ps.points.resize(3, 1);
  ps.points << 0.0, 1.0, 1.0 + gap;
  return normalize(MetricSpace::from_points(std::move(ps)));
}

}  // namespace

TEST_CASE("partition bookkeeping") {
  auto p = Partition::from_assignment({5, 2, 9}, {7, 7, 3});
  CHECK(p.clusters.size() == 2);
  CHECK(p.cluster_of(5) == p.cluster_of(2));
  CHECK(p.cluster_of(9) != p.cluster_of(5));
  CHECK(p.cluster_of(4) == -1);
}

TEST_CASE("sample_partition basics per scheme") {
  auto space = gaussian_space(24, 3, 2.0, 42);
  auto domain = all_of(space);
  for (const char* name : {"ball-carving", "lsh-pstable", "random-shift"}) {
    auto scheme = make_scheme(name, {3.0, std::nullopt});
    Rng rng = make_rng(1, name);
    double delta_scale = 2.0;
    auto part = sample_partition(*scheme, space, domain, delta_scale, rng);
    CHECK(check_bounded(part, space, scheme->t() * delta_scale));
    size_t covered = 0;
    for (const auto& c : part.clusters) covered += c.size();
    CHECK(covered == domain.size());

    // Single-point domain: one singleton cluster.
    if (std::string(name) != "strong-graph") {
      Rng r2 = make_rng(2, name);
      auto single = sample_partition(*scheme, space, {3}, delta_scale, r2);
      CHECK(single.clusters.size() == 1);
      CHECK(single.clusters[0] == std::vector<int>{3});
    }
  }
}

TEST_CASE("far pairs are never co-clustered") {
  auto space = pair_space(50.0);  // indices 0 and 2 sit far apart
  for (const char* name : {"ball-carving", "lsh-pstable", "random-shift"}) {
    auto scheme = make_scheme(name, {2.0, std::nullopt});
    Rng rng = make_rng(3, name);
    for (int s = 0; s < 30; ++s) {
      auto part = scheme->sample(space, {0, 2}, 1.0, rng);  // bound t*Delta = 2
      CHECK(part.cluster_of(0) != part.cluster_of(2));
    }
  }
}

TEST_CASE("scheme and backing mismatch") {
  auto gspace = grid_space(3);
  auto carving = make_scheme("ball-carving", {2.0, std::nullopt});
  Rng rng(1);
  CHECK_THROWS_AS(carving->sample(gspace, all_of(gspace), 1.0, rng), InvalidInputError);
  auto strong = make_scheme("strong-graph", {2.0, std::nullopt});
  auto pspace = gaussian_space(8, 2, 2.0, 5);
  CHECK_THROWS_AS(strong->sample(pspace, all_of(pspace), 1.0, rng), InvalidInputError);
}

TEST_CASE("covering batch phi formula and resampling") {
  auto space = gaussian_space(100, 4, 2.0, 17);
  auto domain = all_of(space);
  Rng rng(11);

  // Delta below the minimum distance: coverage is vacuous, phi is exact.
  auto scheme = make_scheme("random-shift", {3.0, 0.5});
  auto batch = covering_partitions(*scheme, space, domain, domain, 0.5, rng);
  CHECK(batch.phi == 19);  // ceil(2 ln 100 / 0.5)
  CHECK(batch.partitions.size() == 19);
  CHECK(batch.resample_rounds == 0);

  OneClusterScheme trivial(1e9);
  auto tb = covering_partitions(trivial, space, domain, domain, 3.0, rng);
  CHECK(tb.phi == static_cast<int>(std::ceil(2.0 * std::log(100.0))));
  CHECK(tb.resample_rounds == 0);

  // Two points farther than Delta: vacuously covered in round 0.
  auto two = pair_space(50.0);
  auto b2 = covering_partitions(*scheme, two, {0, 2}, {0, 2}, 1.0, rng);
  CHECK(b2.resample_rounds == 0);
}

TEST_CASE("covering batch verifies coverage by construction") {
  Rng rng(23);
  for (int idx : {0, 1, 2, 5, 6, 9}) {
    auto space = corpus_space(idx);
    auto domain = all_of(space);
    auto scheme = space.is_graph()
                      ? make_scheme("strong-graph", {4.0, std::nullopt})
                      : make_scheme("random-shift", {4.0, std::nullopt});
    double delta_scale = 1.5;
    auto batch =
        covering_partitions(*scheme, space, domain, domain, delta_scale, rng);
    for (int a = 0; a < space.size(); ++a) {
      for (int b = a + 1; b < space.size(); ++b) {
        if (space.distance(a, b) > delta_scale) continue;
        bool covered = false;
        for (const auto& part : batch.partitions) {
          if (part.cluster_of(a) == part.cluster_of(b)) {
            covered = true;
            break;
          }
        }
        CHECK(covered);
      }
    }
    for (const auto& part : batch.partitions) {
      CHECK(check_bounded(part, space, scheme->t() * delta_scale));
    }
  }
}

TEST_CASE("round cap exceeded reports coverage") {
  // delta = 1 promised but the scheme always splits the close pair.
  class SplitScheme : public DecompositionScheme {
   public:
    SplitScheme() : DecompositionScheme({2.0, 1.0}) {}
    std::string name() const override { return "split"; }
    bool supports(const MetricSpace&) const override { return true; }
    Partition sample(const MetricSpace&, const std::vector<int>& domain, double,
                     Rng&) const override {
      std::vector<int> labels(domain.size());
      std::iota(labels.begin(), labels.end(), 0);
      return Partition::from_assignment(domain, labels);
    }
  } split;
  auto space = pair_space(1.0);
  Rng rng(4);
  CHECK_THROWS_AS(
      covering_partitions(split, space, {0, 1}, {0, 1}, 2.0, rng, {}, 2),
      CapExceededError);
}

TEST_CASE("lsh amplification arithmetic") {
  LshFamily base;
  base.p1 = 0.9;
  base.p2 = 0.5;
  CHECK(lsh_amplify(base, 16).k == 8);
  CHECK(lsh_amplify(base, 16).far_bound() == doctest::Approx(1.0 / 256.0));

  base.p2 = 0.25;
  CHECK(lsh_amplify(base, 16).k == 4);
  CHECK(lsh_amplify(base, 16).far_bound() == doctest::Approx(1.0 / 256.0));

  base.p1 = base.p2 = 0.3;
  auto degenerate = lsh_amplify(base, 10);
  CHECK(degenerate.near_bound() == doctest::Approx(degenerate.far_bound()));

  base.p2 = 1.0;
  CHECK_THROWS_AS(lsh_amplify(base, 10), InvalidInputError);
}

TEST_CASE("amplified k is minimal") {
  Rng rng(31);
  std::uniform_real_distribution<double> up(0.05, 0.95);
  std::uniform_int_distribution<int> un(2, 5000);
  for (int i = 0; i < 50; ++i) {
    LshFamily base;
    base.p2 = up(rng);
    base.p1 = std::max(base.p2, 0.97);
    int n = un(rng);
    int k = lsh_amplify(base, n).k;
    double target = 1.0 / (static_cast<double>(n) * n);
    CHECK(std::pow(base.p2, k) <= target);
    if (k > 1) CHECK(std::pow(base.p2, k - 1) > target);
  }
}

TEST_CASE("bernoulli product rule for concatenation") {
  // Synthetic base hash: collide iff an independent Bernoulli(q) coin lands
  // heads; the k-fold concatenation must collide with frequency q^k.
  Rng rng(57);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double q : {0.3, 0.5, 0.9}) {
    LshFamily base;
    base.p1 = 1.0;
    base.p2 = q;
    const int k = lsh_amplify(base, 32).k;
    const int trials = 10'000;
    int hits = 0;
    for (int s = 0; s < trials; ++s) {
      bool collide = true;
      for (int i = 0; i < k && collide; ++i) collide = unif(rng) < q;
      hits += collide;
    }
    const double expect = std::pow(q, k);
    const double sigma = std::sqrt(expect * (1.0 - expect) / trials);
    CHECK(std::abs(static_cast<double>(hits) / trials - expect) <= 3.0 * sigma);
  }
}

TEST_CASE("p-stable hash calibration") {
  PStableHashFamily fam(2.0, 1.0, 1);
  Rng rng(71);
  // Equal points always collide.
  auto f = pstable_hash_family(fam, 0.0, 4.0, 2000, rng);
  CHECK(f.p1 == doctest::Approx(1.0));

  // A pair far beyond width*t almost never collides.
  auto far = pstable_hash_family(fam, 25.0, 4.0, 10'000, rng);
  CHECK(far.p2 < 0.05);

  // Collision rate is non-increasing in distance (2 sigma slack per step).
  double prev = 1.1;
  for (double dist : {0.2, 0.6, 1.2, 2.4, 4.8}) {
    auto g = pstable_hash_family(fam, dist, 2.0, 10'000, rng);
    double sigma = std::sqrt(0.25 / 10'000.0);
    CHECK(g.p1 <= prev + 2.0 * sigma);
    prev = g.p1;
  }
}

TEST_CASE("lsh partition eviction") {
  auto space = pair_space(50.0);
  PStableHashFamily base(2.0, 1e6, 1);  // everything lands in one bucket
  LshFamily fam;
  fam.p1 = fam.p2 = 0.5;
  fam.k = 1;
  Rng rng(3);
  auto part = lsh_to_partition(fam, base, space, {0, 2}, 1.0, 2.0, rng);
  CHECK(part.clusters.size() == 2);  // both evicted to singletons

  auto close_part = lsh_to_partition(fam, base, space, {0, 1}, 1.0, 2.0, rng);
  CHECK(close_part.clusters.size() == 1);  // same bucket, within t*Delta
}

TEST_CASE("cap ratio monte carlo") {
  Rng rng(101);
  CHECK(cap_ratio_mc(3, 0.0, 1.0, 5000, rng) == doctest::Approx(1.0));
  CHECK(cap_ratio_mc(3, 2.0, 1.0, 5000, rng) == 0.0);
  CHECK(cap_ratio_mc(3, 2.1, 1.0, 5000, rng) == 0.0);

  // d = 2, u = r: closed-form lens area ratio.
  const double exact = (2.0 * M_PI / 3.0 - std::sqrt(3.0) / 2.0) / M_PI;
  const int samples = 100'000;
  double est = cap_ratio_mc(2, 1.0, 1.0, samples, rng);
  const double sigma = std::sqrt(exact * (1.0 - exact) / samples);
  CHECK(std::abs(est - exact) <= 3.0 * sigma);

  CHECK_THROWS_AS(cap_ratio_mc(2, 0.5, 1.0, 10, rng), InvalidInputError);
}

TEST_CASE("ball carving basics") {
  PointSet one;
  one.p = 2.0;
  one.points.resize(1, 2);
  one.points << 0, 0;
  auto sp1 = MetricSpace::from_points(std::move(one));
  Rng rng(5);
  auto part = ball_carving(sp1, {0}, 1.0, 2.0, rng);
  CHECK(part.clusters.size() == 1);

  auto space = gaussian_space(30, 4, 2.0, 13);
  auto domain = all_of(space);
  for (int s = 0; s < 10; ++s) {
    auto p = ball_carving(space, domain, 1.5, 3.0, rng);
    CHECK(check_bounded(p, space, 3.0 * 1.5));
  }

  CHECK_THROWS_AS(ball_carving(space, domain, 1.0, 1.5, rng), InvalidInputError);
}

TEST_CASE("random shift partition basics") {
  auto space = gaussian_space(30, 3, 2.0, 19);
  auto domain = all_of(space);
  Rng rng(7);
  for (int s = 0; s < 10; ++s) {
    auto p = random_shift_net_partition(space, domain, 2.0, 3.0, rng);
    CHECK(check_bounded(p, space, 6.0));
  }
  // Near pair co-clusters sometimes (Monte-Carlo sanity).
  auto near = pair_space(50.0);
  int hits = 0;
  for (int s = 0; s < 500; ++s) {
    auto p = random_shift_net_partition(near, {0, 1}, 1.0, 8.0, rng);
    hits += p.cluster_of(0) == p.cluster_of(1);
  }
  CHECK(hits > 0);
}

TEST_CASE("strong graph decomposition") {
  WeightedGraph single;
  single.n = 1;
  auto s1 = MetricSpace::from_graph(single);
  Rng rng(9);
  auto p1 = strong_graph_decomposition(s1, 1.0, 2.0, rng);
  CHECK(p1.clusters.size() == 1);

  auto space = geometric_space(60, 0.3, 8);
  for (int s = 0; s < 10; ++s) {
    auto p = strong_graph_decomposition(space, 2.0, 3.0, rng);
    CHECK(check_strongly_bounded(p, space, 6.0));
    CHECK(check_bounded(p, space, 6.0));
  }
}

TEST_CASE("strong check rejects disconnected clusters") {
  WeightedGraph path;
  path.n = 3;
  path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  auto space = normalize(MetricSpace::from_graph(path));
  auto bad = Partition::from_assignment({0, 1, 2}, {0, 1, 0});
  CHECK_FALSE(check_strongly_bounded(bad, space, 1e9));
  auto singles = Partition::from_assignment({0, 1, 2}, {0, 1, 2});
  CHECK(check_bounded(singles, space, 0.0));
  CHECK(check_strongly_bounded(singles, space, 0.0));
}

TEST_CASE("scheme determinism") {
  auto space = gaussian_space(40, 3, 2.0, 33);
  auto domain = all_of(space);
  for (const char* name : {"ball-carving", "lsh-pstable", "random-shift"}) {
    auto scheme = make_scheme(name, {3.0, std::nullopt});
    Rng a = make_rng(12, "det"), b = make_rng(12, "det");
    auto pa = scheme->sample(space, domain, 1.5, a);
    auto pb = scheme->sample(space, domain, 1.5, b);
    CHECK(pa.cluster_id == pb.cluster_id);
    CHECK(pa.domain == pb.domain);
  }
}

TEST_CASE("empirical cluster probability") {
  auto space = pair_space(50.0);
  OneClusterScheme together(1e12);
  Rng rng(77);
  auto est = empirical_cluster_probability(together, space, 0, 1, 1.0, 40, rng);
  CHECK(est.estimate == doctest::Approx(1.0));

  auto shift = make_scheme("random-shift", {2.0, std::nullopt});
  auto far = empirical_cluster_probability(*shift, space, 0, 2, 1.0, 40, rng);
  CHECK(far.estimate == 0.0);  // boundedness forbids co-clustering

  CHECK_THROWS_AS(empirical_cluster_probability(*shift, space, 0, 1, 1.0, 5, rng),
                  InvalidInputError);
}
