#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lightspan/metric.hpp"

namespace lightspan {

// A clustering of a domain (subset of metric indices) into disjoint,
// non-empty clusters jointly covering the domain.
struct Partition {
  std::vector<int> domain;
  std::vector<int> cluster_id;  // parallel to domain
  std::vector<std::vector<int>> clusters;

  int cluster_of(int point) const;  // -1 if not in domain
  static Partition from_assignment(const std::vector<int>& domain,
                                   const std::vector<int>& cluster_id);
};

struct SchemeParams {
  double t = 2.0;
  std::optional<double> delta_hint;  // nullopt = adaptive (pilot-estimated)
};

// (r, cr, p1, p2)-sensitive hash family metadata, with amplification length k.
struct LshFamily {
  std::string description;
  double r = 0.0;
  double cr = 0.0;
  double p1 = 1.0;
  double p2 = 1.0;
  int k = 1;

  double rho() const;
  double near_bound() const;  // p1^k
  double far_bound() const;   // p2^k
};

// k-fold concatenation with k = ceil(log_{1/p2} n^2), so far pairs collide
// with probability at most n^{-2}.
LshFamily lsh_amplify(const LshFamily& base, int n);

// Concrete p-stable projection hash h(x) = floor((a.x + b) / width).
struct PStableHash {
  Eigen::VectorXd a;
  double b = 0.0;
  double width = 1.0;
  std::int64_t operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

class PStableHashFamily {
 public:
  PStableHashFamily(double p, double width, int dim);
  PStableHash sample(Rng& rng) const;
  double p_exponent() const { return p_; }
  double width() const { return width_; }

 private:
  double p_;
  double width_;
  int dim_;
};

// Base family with p1, p2 filled by Monte-Carlo calibration at distances
// r and t*r (distances measured in raw coordinate units).
LshFamily pstable_hash_family(const PStableHashFamily& family, double r,
                              double t, int samples, Rng& rng);

// Batch of partitions jointly co-clustering every coverage pair within Delta.
struct CoveringBatch {
  std::vector<Partition> partitions;
  double delta_used = 1.0;
  int phi = 0;  // initial batch size ceil(2 ln n / delta)
  int resample_rounds = 0;
};

// Sampler of (t*Delta)-bounded random partitions.
class DecompositionScheme {
 public:
  explicit DecompositionScheme(SchemeParams params) : params_(params) {}
  virtual ~DecompositionScheme() = default;

  virtual std::string name() const = 0;
  virtual bool supports(const MetricSpace& space) const = 0;
  virtual Partition sample(const MetricSpace& space,
                           const std::vector<int>& domain, double delta_scale,
                           Rng& rng) const = 0;

  const SchemeParams& params() const { return params_; }
  double t() const { return params_.t; }

 protected:
  SchemeParams params_;
};

// Euclidean ball carving: balls of radius t*Delta/2 around random centers
// claim still-unassigned points until the domain is exhausted.
class BallCarvingScheme : public DecompositionScheme {
 public:
  explicit BallCarvingScheme(SchemeParams params);
  ~BallCarvingScheme() override;
  std::string name() const override { return "ball-carving"; }
  bool supports(const MetricSpace& space) const override;
  Partition sample(const MetricSpace& space, const std::vector<int>& domain,
                   double delta_scale, Rng& rng) const override;

 private:
  // Covering batches resample the same (domain, scale) pair hundreds of
  // times; the carving neighbor index is identical across those draws.
  struct IndexCache;
  mutable std::unique_ptr<IndexCache> cache_;
};

// p-stable LSH buckets, amplified for the domain size, with simultaneous
// eviction of points seeing a too-far bucket partner.
class LshPStableScheme : public DecompositionScheme {
 public:
  explicit LshPStableScheme(SchemeParams params,
                            std::uint64_t calibration_seed = 0x10af5ULL);
  std::string name() const override { return "lsh-pstable"; }
  bool supports(const MetricSpace& space) const override;
  Partition sample(const MetricSpace& space, const std::vector<int>& domain,
                   double delta_scale, Rng& rng) const override;

  // Calibrated and amplified family for a given scale and domain size.
  LshFamily family_for(const MetricSpace& space, int n, double delta_scale) const;

 private:
  std::uint64_t calibration_seed_;
  mutable std::map<std::pair<double, int>, LshFamily> cache_;
};

// Generic provider for arbitrary metrics: net centers with independently
// shifted radii, claimed in random permutation order.
class RandomShiftScheme : public DecompositionScheme {
 public:
  explicit RandomShiftScheme(SchemeParams params);
  std::string name() const override { return "random-shift"; }
  bool supports(const MetricSpace& space) const override { return true; }
  Partition sample(const MetricSpace& space, const std::vector<int>& domain,
                   double delta_scale, Rng& rng) const override;
};

// Exponentially shifted multi-source Dijkstra over the graph; clusters are
// connected with strong diameter at most t*Delta.
class StrongGraphScheme : public DecompositionScheme {
 public:
  explicit StrongGraphScheme(SchemeParams params);
  std::string name() const override { return "strong-graph"; }
  bool supports(const MetricSpace& space) const override;
  Partition sample(const MetricSpace& space, const std::vector<int>& domain,
                   double delta_scale, Rng& rng) const override;
};

std::unique_ptr<DecompositionScheme> make_scheme(const std::string& name,
                                                 SchemeParams params);

Partition sample_partition(const DecompositionScheme& scheme,
                           const MetricSpace& space,
                           const std::vector<int>& domain, double delta_scale,
                           Rng& rng);

// Samples phi = ceil(2 ln n / delta) partitions of `partition_domain` and
// verifies every `coverage_domain` pair within Delta is co-clustered at
// least once; resamples whole batches (up to `round_cap`) otherwise.
CoveringBatch covering_partitions(const DecompositionScheme& scheme,
                                  const MetricSpace& space,
                                  const std::vector<int>& partition_domain,
                                  const std::vector<int>& coverage_domain,
                                  double delta_scale, Rng& rng,
                                  std::optional<double> delta_override = {},
                                  int round_cap = 16);

// Pilot estimate of the same-cluster probability for pairs within Delta:
// 10th-percentile co-clustering frequency over sampled pairs, floored at 1/n.
double estimate_delta(const DecompositionScheme& scheme, const MetricSpace& space,
                      const std::vector<int>& partition_domain,
                      const std::vector<int>& coverage_domain,
                      double delta_scale, Rng& rng);

Partition ball_carving(const MetricSpace& space, const std::vector<int>& domain,
                       double r, double t, Rng& rng);

Partition lsh_to_partition(const LshFamily& family,
                           const PStableHashFamily& base,
                           const MetricSpace& space,
                           const std::vector<int>& domain, double delta_scale,
                           double t, Rng& rng);

Partition random_shift_net_partition(const MetricSpace& space,
                                     const std::vector<int>& domain,
                                     double delta_scale, double t, Rng& rng);

Partition strong_graph_decomposition(const MetricSpace& space,
                                     double delta_scale, double t, Rng& rng);

// Monte-Carlo estimate of C_d(u, r) / V_d(r): the fraction of a radius-r
// ball lying within r of a point at distance u.
double cap_ratio_mc(int d, double u, double r, int samples, Rng& rng);

// Weak diameter check: every in-cluster pair within `bound`.
bool check_bounded(const Partition& partition, const MetricSpace& space,
                   double bound);

// Strong diameter check: per-cluster APSP inside the induced subgraph;
// a disconnected cluster fails for any finite bound.
bool check_strongly_bounded(const Partition& partition, const MetricSpace& space,
                            double bound);

struct ProbabilityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

ProbabilityEstimate empirical_cluster_probability(
    const DecompositionScheme& scheme, const MetricSpace& space, int x, int y,
    double delta_scale, int trials, Rng& rng);

}  // namespace lightspan
