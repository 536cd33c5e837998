#include "lightspan/decomp.hpp"

#include <algorithm>

#include "lightspan/nets.hpp"
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

namespace lightspan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> full_domain(const MetricSpace& space) {
  std::vector<int> d(space.size());
  std::iota(d.begin(), d.end(), 0);
  return d;
}

// Symmetric p-stable variate: Gaussian (p=2), Cauchy (p=1),
// Chambers-Mallows-Stuck for 1 < p < 2.
double sample_stable(double p, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (p == 2.0) {
    std::normal_distribution<double> normal(0.0, 1.0);
    // N(0, 2) is 2-stable with the ||.||_2 scaling convention; the constant
    // scale is irrelevant here since the hash width is calibrated anyway.
    return normal(rng);
  }
  const double theta = M_PI * (unif(rng) - 0.5);
  if (p == 1.0) return std::tan(theta);
  double w = -std::log(1.0 - unif(rng));
  return std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p) *
         std::pow(std::cos(theta * (1.0 - p)) / w, (1.0 - p) / p);
}

}  // namespace

int Partition::cluster_of(int point) const {
  auto it = std::lower_bound(domain.begin(), domain.end(), point);
  if (it == domain.end() || *it != point) return -1;
  return cluster_id[it - domain.begin()];
}

Partition Partition::from_assignment(const std::vector<int>& domain,
                                     const std::vector<int>& raw_labels) {
  if (domain.size() != raw_labels.size()) {
    throw InvalidInputError("assignment length mismatch");
  }
  std::vector<size_t> order(domain.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return domain[a] < domain[b]; });

  Partition p;
  p.domain.reserve(domain.size());
  p.cluster_id.reserve(domain.size());
  std::map<int, int> dense;
  for (size_t idx : order) {
    int raw = raw_labels[idx];
    auto [it, fresh] = dense.emplace(raw, static_cast<int>(p.clusters.size()));
    if (fresh) p.clusters.emplace_back();
    p.domain.push_back(domain[idx]);
    p.cluster_id.push_back(it->second);
    p.clusters[it->second].push_back(domain[idx]);
  }
  return p;
}

double LshFamily::rho() const { return std::log(1.0 / p1) / std::log(1.0 / p2); }
double LshFamily::near_bound() const { return std::pow(p1, k); }
double LshFamily::far_bound() const { return std::pow(p2, k); }

LshFamily lsh_amplify(const LshFamily& base, int n) {
  if (n < 2) throw InvalidInputError("amplification needs n >= 2");
  if (base.p2 >= 1.0) throw InvalidInputError("cannot amplify a family with p2 = 1");
  LshFamily out = base;
  const double target = 1.0 / (static_cast<double>(n) * n);
  if (base.p2 <= 0.0) {
    out.k = 1;
    return out;
  }
  int k = static_cast<int>(
      std::ceil(std::log(static_cast<double>(n) * n) / std::log(1.0 / base.p2)));
  k = std::max(k, 1);
  // Snap to the minimal k with p2^k <= n^-2 despite rounding in the logs.
  while (k > 1 && std::pow(base.p2, k - 1) <= target) --k;
  while (std::pow(base.p2, k) > target) ++k;
  out.k = k;
  return out;
}

std::int64_t PStableHash::operator()(
    const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  return static_cast<std::int64_t>(std::floor((a.dot(x) + b) / width));
}

PStableHashFamily::PStableHashFamily(double p, double width, int dim)
    : p_(p), width_(width), dim_(dim) {
  if (p < 1.0 || p > 2.0) throw InvalidInputError("unsupported norm exponent for p-stable hashing");
  if (!(width > 0.0)) throw InvalidInputError("hash width must be positive");
}

PStableHash PStableHashFamily::sample(Rng& rng) const {
  PStableHash h;
  h.a.resize(dim_);
  for (int i = 0; i < dim_; ++i) h.a[i] = sample_stable(p_, rng);
  std::uniform_real_distribution<double> unif(0.0, width_);
  h.b = unif(rng);
  h.width = width_;
  return h;
}

LshFamily pstable_hash_family(const PStableHashFamily& family, double r,
                              double t, int samples, Rng& rng) {
  // Collision probability of a p-stable projection hash depends only on the
  // l_p distance, so a pair along the first axis calibrates all pairs.
  auto collision_rate = [&](double dist) {
    std::uniform_real_distribution<double> unif(0.0, family.width());
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      const double a1 = sample_stable(family.p_exponent(), rng);
      const double b = unif(rng);
      if (std::floor(b / family.width()) ==
          std::floor((a1 * dist + b) / family.width())) {
        ++hits;
      }
    }
    return static_cast<double>(hits) / samples;
  };
  LshFamily out;
  out.description = "p-stable projection, p=" + std::to_string(family.p_exponent()) +
                    ", width=" + std::to_string(family.width());
  out.r = r;
  out.cr = t * r;
  out.p1 = collision_rate(r);
  out.p2 = collision_rate(t * r);
  // Empirical estimates can invert on tiny samples; the family is only a
  // sensitivity descriptor, so clamp to the defining order.
  out.p1 = std::clamp(out.p1, 1e-6, 1.0);
  out.p2 = std::clamp(out.p2, 1e-6, out.p1);
  out.k = 1;
  return out;
}

Partition lsh_to_partition(const LshFamily& family, const PStableHashFamily& base,
                           const MetricSpace& space, const std::vector<int>& domain,
                           double delta_scale, double t, Rng& rng) {
  const double bound = t * delta_scale;
  std::vector<PStableHash> hashes;
  hashes.reserve(family.k);
  for (int i = 0; i < family.k; ++i) hashes.push_back(base.sample(rng));

  const auto& pts = space.points().points;
  std::map<std::vector<std::int64_t>, std::vector<int>> buckets;
  for (int x : domain) {
    std::vector<std::int64_t> key(family.k);
    for (int i = 0; i < family.k; ++i) key[i] = hashes[i](pts.row(x));
    buckets[std::move(key)].push_back(x);
  }

  std::vector<int> dom;
  std::vector<int> labels;
  int next_label = 0;
  int singleton_label = -1;
  for (auto& [key, members] : buckets) {
    const int bucket_label = next_label++;
    // Simultaneous eviction: computed against the original bucket, applied
    // at once, so the result is order-independent.
    for (size_t a = 0; a < members.size(); ++a) {
      bool evict = false;
      for (size_t b = 0; b < members.size(); ++b) {
        if (a != b && space.distance(members[a], members[b]) > bound) {
          evict = true;
          break;
        }
      }
      dom.push_back(members[a]);
      labels.push_back(evict ? singleton_label-- : bucket_label);
    }
  }
  return Partition::from_assignment(dom, labels);
}

namespace {

// Scratch geometry for carving one (domain, radius) pair: local coordinates
// plus, per point, the points within 2*radius of it. A candidate center drawn
// inside some anchor's ball can only claim points from that anchor's list,
// which turns the per-draw work from O(|domain|) into O(|neighborhood|).
struct CarveIndex {
  Eigen::MatrixXd coords;
  Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> coordsf;
  double radius = 0.0;
  std::vector<std::vector<int>> neigh;
  // Per-anchor contiguous float copies of the neighbor coordinates: the claim
  // scan is the hot loop of the whole build, and a packed single-precision
  // block lets it run vectorized. Only the scan uses floats; the acceptance
  // and the partition itself are unaffected beyond a hair of ball boundary,
  // and every boundedness/coverage/stretch guarantee is re-verified exactly.
  std::vector<Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      neigh_coords;
};

CarveIndex build_carve_index(const MetricSpace& space,
                             const std::vector<int>& domain, double radius) {
  CarveIndex index;
  const int m = static_cast<int>(domain.size());
  const int d = space.points().dim();
  index.radius = radius;
  index.coords.resize(m, d);
  for (int i = 0; i < m; ++i) {
    index.coords.row(i) = space.points().points.row(domain[i]);
  }
  index.coordsf = index.coords.cast<float>();
  index.neigh.resize(m);
  const double reach2 = 4.0 * radius * radius;
  for (int i = 0; i < m; ++i) {
    index.neigh[i].push_back(i);
    for (int j = i + 1; j < m; ++j) {
      if ((index.coords.row(i) - index.coords.row(j)).squaredNorm() <= reach2) {
        index.neigh[i].push_back(j);
        index.neigh[j].push_back(i);
      }
    }
  }
  index.neigh_coords.resize(m);
  for (int i = 0; i < m; ++i) {
    auto& block = index.neigh_coords[i];
    block.resize(static_cast<int>(index.neigh[i].size()), d);
    for (size_t j = 0; j < index.neigh[i].size(); ++j) {
      block.row(static_cast<int>(j)) =
          index.coords.row(index.neigh[i][j]).cast<float>();
    }
  }
  return index;
}

Partition carve_with_index(const CarveIndex& index,
                           const std::vector<int>& domain, Rng& rng) {
  const int m = static_cast<int>(domain.size());
  const int d = static_cast<int>(index.coords.cols());
  const double radius = index.radius;

  std::vector<int> labels(m, -1);
  std::vector<int> unassigned(m), where(m);
  std::iota(unassigned.begin(), unassigned.end(), 0);
  std::iota(where.begin(), where.end(), 0);

  // Centers falling in no unassigned ball produce empty clusters and do not
  // affect the partition, so we sample directly from the conditional law:
  // uniform over the union of radius-R balls around unassigned points
  // (pick a ball, sample inside it, accept with probability 1/overlap).
  // The enclosing box of the literal procedure contains every such ball,
  // making the two processes distribution-identical.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr std::int64_t kDrawCap = 1'000'000;
  std::int64_t draws = 0;
  int next_cluster = 0;
  Eigen::VectorXd center(d);
  Eigen::RowVectorXf centerf(d);
  Eigen::VectorXf dist2;
  const float radius2f = static_cast<float>(radius * radius);
  std::vector<int> claimed;
  while (!unassigned.empty()) {
    if (++draws > kDrawCap) {
      throw CapExceededError("ball carving exceeded the center draw cap");
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(unassigned.size()) - 1);
    const int anchor = unassigned[pick(rng)];
    for (int j = 0; j < d; ++j) center[j] = normal(rng);
    center *= radius * std::pow(unif(rng), 1.0 / d) / center.norm();
    center += index.coords.row(anchor).transpose();
    centerf = center.transpose().cast<float>();

    const auto& ids = index.neigh[anchor];
    claimed.clear();
    if (unassigned.size() * 2 < ids.size()) {
      // Late stage: fewer live points than neighbors, scan those directly.
      for (int pos : unassigned) {
        if ((index.coordsf.row(pos) - centerf).squaredNorm() <= radius2f) {
          claimed.push_back(pos);
        }
      }
    } else {
      dist2 = (index.neigh_coords[anchor].rowwise() - centerf).rowwise().squaredNorm();
      for (size_t j = 0; j < ids.size(); ++j) {
        if (labels[ids[j]] < 0 && dist2[static_cast<int>(j)] <= radius2f) {
          claimed.push_back(ids[j]);
        }
      }
    }
    if (unif(rng) * static_cast<double>(claimed.size()) >= 1.0) continue;

    for (int pos : claimed) {
      labels[pos] = next_cluster;
      const int slot = where[pos];
      const int last = unassigned.back();
      unassigned[slot] = last;
      where[last] = slot;
      unassigned.pop_back();
    }
    ++next_cluster;
  }
  return Partition::from_assignment(domain, labels);
}

}  // namespace

Partition ball_carving(const MetricSpace& space, const std::vector<int>& domain,
                       double r, double t, Rng& rng) {
  if (!space.is_euclidean()) {
    throw InvalidInputError("ball carving requires an l_2 point backing");
  }
  if (t < 2.0) throw InvalidInputError("ball carving requires t >= 2");
  const double radius = t * (r / space.scale_factor()) / 2.0;
  const CarveIndex index = build_carve_index(space, domain, radius);
  return carve_with_index(index, domain, rng);
}

Partition random_shift_net_partition(const MetricSpace& space,
                                     const std::vector<int>& domain,
                                     double delta_scale, double t, Rng& rng) {
  if (t < 2.0) throw InvalidInputError("random shift partition requires t >= 2");
  const double max_radius = t * delta_scale / 2.0;
  // Every domain point doubles as a candidate center, and radii never drop
  // below Delta. Both choices matter for the covering loop upstream: any
  // pair within Delta is co-clustered whenever one of its endpoints wins
  // the permutation among the balls containing either point, so the
  // co-clustering probability is at least 1/|domain| for every such pair.
  const double min_radius = std::min(std::max(t * delta_scale / 4.0, delta_scale),
                                     max_radius);
  std::uniform_real_distribution<double> shift(min_radius, max_radius);
  std::vector<double> radii(domain.size());
  for (auto& rr : radii) rr = min_radius < max_radius ? shift(rng) : max_radius;

  std::vector<int> order(domain.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<int> labels(domain.size(), -1);
  for (size_t i = 0; i < domain.size(); ++i) {
    for (int c : order) {
      if (space.distance(domain[i], domain[c]) <= radii[c]) {
        labels[i] = c;  // a point always lies in its own ball, so this hits
        break;
      }
    }
  }
  return Partition::from_assignment(domain, labels);
}

Partition strong_graph_decomposition(const MetricSpace& space, double delta_scale,
                                     double t, Rng& rng) {
  if (!space.is_graph()) {
    throw InvalidInputError("strong decomposition requires a graph backing");
  }
  if (t < 2.0) throw InvalidInputError("strong decomposition requires t >= 2");
  const int n = space.size();
  std::vector<int> domain = full_domain(space);
  if (n == 1) return Partition::from_assignment(domain, {0});

  const double radius_raw = t * (delta_scale / space.scale_factor()) / 2.0;
  // The truncation below already enforces the diameter bound, so the shift
  // scale can stay proportional to the radius itself; dividing by log n
  // would make winners' margins far smaller than Delta and pairs near
  // distance Delta would almost never land in one cluster.
  const double mean = t * (delta_scale / space.scale_factor()) / 8.0;
  std::exponential_distribution<double> expo(1.0 / mean);
  std::vector<double> start_shift(n);
  for (int v = 0; v < n; ++v) start_shift[v] = expo(rng);

  // Multi-source Dijkstra with start offsets -shift[v], truncated at the
  // radius budget; first arrival claims a vertex. Paths stay inside the
  // winning cluster, so clusters are connected with strong radius
  // at most radius_raw.
  const auto& adj = space.adjacency();
  std::vector<int> owner(n, -1);
  using Item = std::tuple<double, double, int, int>;  // key, dist, vertex, src
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int v = 0; v < n; ++v) pq.emplace(-start_shift[v], 0.0, v, v);
  while (!pq.empty()) {
    auto [key, dist, u, src] = pq.top();
    pq.pop();
    if (owner[u] >= 0) continue;
    owner[u] = src;
    for (auto [v, w] : adj[u]) {
      if (owner[v] >= 0) continue;
      const double nd = dist + w;
      if (nd <= radius_raw) pq.emplace(nd - start_shift[src], nd, v, src);
    }
  }
  return Partition::from_assignment(domain, owner);
}

double cap_ratio_mc(int d, double u, double r, int samples, Rng& rng) {
  if (d < 1 || u < 0.0 || !(r > 0.0)) throw InvalidInputError("bad cap ratio arguments");
  if (samples < 1000) throw InvalidInputError("cap_ratio_mc needs >= 1000 samples");
  if (u > 2.0 * r) return 0.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(d);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < d; ++j) x[j] = normal(rng);
    x *= r * std::pow(unif(rng), 1.0 / d) / x.norm();
    x[0] -= u;
    if (x.squaredNorm() <= r * r) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

bool check_bounded(const Partition& partition, const MetricSpace& space,
                   double bound) {
  for (const auto& cluster : partition.clusters) {
    for (size_t a = 0; a < cluster.size(); ++a) {
      for (size_t b = a + 1; b < cluster.size(); ++b) {
        if (space.distance(cluster[a], cluster[b]) > bound * (1.0 + kRelTol)) {
          return false;
        }
      }
    }
  }
  return true;
}

bool check_strongly_bounded(const Partition& partition, const MetricSpace& space,
                            double bound) {
  const auto& adj = space.adjacency();
  for (const auto& cluster : partition.clusters) {
    std::map<int, int> local;
    for (size_t i = 0; i < cluster.size(); ++i) local[cluster[i]] = static_cast<int>(i);
    std::vector<std::vector<std::pair<int, double>>> sub(cluster.size());
    for (size_t i = 0; i < cluster.size(); ++i) {
      for (auto [v, w] : adj[cluster[i]]) {
        auto it = local.find(v);
        if (it != local.end()) {
          sub[i].emplace_back(it->second, w * space.scale_factor());
        }
      }
    }
    for (size_t i = 0; i < cluster.size(); ++i) {
      auto dist = dijkstra(sub, static_cast<int>(i));
      for (double dd : dist) {
        if (dd > bound * (1.0 + kRelTol)) return false;  // includes infinity
      }
    }
  }
  return true;
}

struct BallCarvingScheme::IndexCache {
  double delta_scale = -1.0;
  std::vector<int> domain;
  CarveIndex index;
};

BallCarvingScheme::BallCarvingScheme(SchemeParams params)
    : DecompositionScheme(params) {
  if (params.t < 2.0) throw InvalidInputError("ball carving requires t >= 2");
}

BallCarvingScheme::~BallCarvingScheme() = default;

bool BallCarvingScheme::supports(const MetricSpace& space) const {
  return space.is_euclidean();
}

Partition BallCarvingScheme::sample(const MetricSpace& space,
                                    const std::vector<int>& domain,
                                    double delta_scale, Rng& rng) const {
  if (!supports(space)) throw InvalidInputError("ball carving on a non-Euclidean backing");
  if (!cache_ || cache_->delta_scale != delta_scale || cache_->domain != domain) {
    const double radius = params_.t * (delta_scale / space.scale_factor()) / 2.0;
    auto fresh = std::make_unique<IndexCache>();
    fresh->delta_scale = delta_scale;
    fresh->domain = domain;
    fresh->index = build_carve_index(space, domain, radius);
    cache_ = std::move(fresh);
  }
  return carve_with_index(cache_->index, domain, rng);
}

LshPStableScheme::LshPStableScheme(SchemeParams params, std::uint64_t calibration_seed)
    : DecompositionScheme(params), calibration_seed_(calibration_seed) {}

bool LshPStableScheme::supports(const MetricSpace& space) const {
  return space.is_points();
}

LshFamily LshPStableScheme::family_for(const MetricSpace& space, int n,
                                       double delta_scale) const {
  auto key = std::make_pair(delta_scale, n);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const double r_raw = delta_scale / space.scale_factor();
  const double width = params_.t * r_raw;
  PStableHashFamily base(space.points().p, width, space.points().dim());
  Rng calib = make_rng(calibration_seed_, "lsh-calibration",
                       std::hash<double>{}(delta_scale));
  LshFamily fam = pstable_hash_family(base, r_raw, params_.t, 4000, calib);
  fam = lsh_amplify(fam, std::max(n, 2));
  cache_.emplace(key, fam);
  return fam;
}

Partition LshPStableScheme::sample(const MetricSpace& space,
                                   const std::vector<int>& domain,
                                   double delta_scale, Rng& rng) const {
  if (!supports(space)) throw InvalidInputError("p-stable LSH on a non-point backing");
  LshFamily fam = family_for(space, static_cast<int>(domain.size()), delta_scale);
  const double r_raw = delta_scale / space.scale_factor();
  PStableHashFamily base(space.points().p, params_.t * r_raw, space.points().dim());
  return lsh_to_partition(fam, base, space, domain, delta_scale, params_.t, rng);
}

RandomShiftScheme::RandomShiftScheme(SchemeParams params)
    : DecompositionScheme(params) {
  if (params.t < 2.0) throw InvalidInputError("random shift requires t >= 2");
}

Partition RandomShiftScheme::sample(const MetricSpace& space,
                                    const std::vector<int>& domain,
                                    double delta_scale, Rng& rng) const {
  return random_shift_net_partition(space, domain, delta_scale, params_.t, rng);
}

StrongGraphScheme::StrongGraphScheme(SchemeParams params)
    : DecompositionScheme(params) {
  if (params.t < 2.0) throw InvalidInputError("strong decomposition requires t >= 2");
}

bool StrongGraphScheme::supports(const MetricSpace& space) const {
  return space.is_graph();
}

Partition StrongGraphScheme::sample(const MetricSpace& space,
                                    const std::vector<int>& domain,
                                    double delta_scale, Rng& rng) const {
  if (!supports(space)) throw InvalidInputError("strong decomposition on a non-graph backing");
  if (static_cast<int>(domain.size()) != space.size()) {
    throw InvalidInputError("strong decomposition partitions the full vertex set");
  }
  return strong_graph_decomposition(space, delta_scale, params_.t, rng);
}

std::unique_ptr<DecompositionScheme> make_scheme(const std::string& name,
                                                 SchemeParams params) {
  if (name == "ball-carving") return std::make_unique<BallCarvingScheme>(params);
  if (name == "lsh-pstable") return std::make_unique<LshPStableScheme>(params);
  if (name == "random-shift") return std::make_unique<RandomShiftScheme>(params);
  if (name == "strong-graph") return std::make_unique<StrongGraphScheme>(params);
  throw InvalidInputError("unknown scheme: " + name);
}

Partition sample_partition(const DecompositionScheme& scheme,
                           const MetricSpace& space,
                           const std::vector<int>& domain, double delta_scale,
                           Rng& rng) {
  if (domain.empty()) throw InvalidInputError("cannot partition an empty domain");
  if (!(delta_scale > 0.0)) throw InvalidInputError("Delta must be positive");
  return scheme.sample(space, domain, delta_scale, rng);
}

double estimate_delta(const DecompositionScheme& scheme, const MetricSpace& space,
                      const std::vector<int>& partition_domain,
                      const std::vector<int>& coverage_domain,
                      double delta_scale, Rng& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (size_t a = 0; a < coverage_domain.size(); ++a) {
    for (size_t b = a + 1; b < coverage_domain.size(); ++b) {
      if (space.distance(coverage_domain[a], coverage_domain[b]) <=
          delta_scale * (1.0 + kRelTol)) {
        pairs.emplace_back(coverage_domain[a], coverage_domain[b]);
      }
    }
  }
  if (pairs.empty()) return 1.0;
  if (pairs.size() > 500) {
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(500);
  }
  constexpr int kPilot = 50;
  std::vector<int> hits(pairs.size(), 0);
  for (int s = 0; s < kPilot; ++s) {
    Partition p = scheme.sample(space, partition_domain, delta_scale, rng);
    for (size_t i = 0; i < pairs.size(); ++i) {
      int ca = p.cluster_of(pairs[i].first);
      if (ca >= 0 && ca == p.cluster_of(pairs[i].second)) ++hits[i];
    }
  }
  std::vector<double> freq(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) freq[i] = static_cast<double>(hits[i]) / kPilot;
  std::sort(freq.begin(), freq.end());
  double est = freq[static_cast<size_t>(0.1 * (freq.size() - 1))];
  const double floor_delta = 1.0 / static_cast<double>(coverage_domain.size());
  return std::clamp(est, floor_delta, 1.0);
}

CoveringBatch covering_partitions(const DecompositionScheme& scheme,
                                  const MetricSpace& space,
                                  const std::vector<int>& partition_domain,
                                  const std::vector<int>& coverage_domain,
                                  double delta_scale, Rng& rng,
                                  std::optional<double> delta_override,
                                  int round_cap) {
  const int n = static_cast<int>(coverage_domain.size());
  CoveringBatch batch;
  if (n < 2) {
    batch.phi = 0;
    return batch;
  }
  double delta = delta_override   ? *delta_override
                 : scheme.params().delta_hint
                     ? *scheme.params().delta_hint
                     : estimate_delta(scheme, space, partition_domain,
                                      coverage_domain, delta_scale, rng);
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInputError("delta must be in (0, 1]");
  batch.delta_used = delta;
  batch.phi = static_cast<int>(std::ceil(2.0 * std::log(n) / delta));

  std::vector<std::pair<int, int>> uncovered;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (space.distance(coverage_domain[a], coverage_domain[b]) <=
          delta_scale * (1.0 + kRelTol)) {
        uncovered.emplace_back(coverage_domain[a], coverage_domain[b]);
      }
    }
  }
  const size_t total_pairs = uncovered.size();

  const std::uint64_t stream = rng();
  int global_index = 0;
  for (int round = 0;; ++round) {
    for (int j = 0; j < batch.phi; ++j, ++global_index) {
      Rng prng = make_rng(stream, "covering-partition", global_index);
      Partition p = scheme.sample(space, partition_domain, delta_scale, prng);
      std::erase_if(uncovered, [&](const std::pair<int, int>& pr) {
        int c = p.cluster_of(pr.first);
        return c >= 0 && c == p.cluster_of(pr.second);
      });
      batch.partitions.push_back(std::move(p));
    }
    if (uncovered.empty()) {
      batch.resample_rounds = round;
      return batch;
    }
    if (round >= round_cap) {
      const double rate =
          total_pairs == 0
              ? 1.0
              : 1.0 - static_cast<double>(uncovered.size()) / total_pairs;
      throw CapExceededError(
          "covering batch round cap exceeded; measured coverage rate " +
          std::to_string(rate) + " with delta " + std::to_string(delta));
    }
  }
}

ProbabilityEstimate empirical_cluster_probability(
    const DecompositionScheme& scheme, const MetricSpace& space, int x, int y,
    double delta_scale, int trials, Rng& rng) {
  if (trials < 30) throw InvalidInputError("need at least 30 trials");
  std::vector<int> domain = full_domain(space);
  int hits = 0;
  for (int s = 0; s < trials; ++s) {
    Partition p = scheme.sample(space, domain, delta_scale, rng);
    int c = p.cluster_of(x);
    if (c >= 0 && c == p.cluster_of(y)) ++hits;
  }
  ProbabilityEstimate out;
  out.estimate = static_cast<double>(hits) / trials;
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / trials);
  return out;
}

}  // namespace lightspan
