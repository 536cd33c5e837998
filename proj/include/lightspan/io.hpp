#pragma once

#include <string>

#include "lightspan/metric.hpp"
#include "lightspan/spanner.hpp"

namespace lightspan {

// Point-set file: header "p <exponent> d <dim>", one point per line.
// Graph file: header "graph <n>", one edge per line "u v w", 0-based.
PointSet load_point_set(const std::string& path);
WeightedGraph load_graph(const std::string& path);

// Loads either format by peeking at the header token.
MetricSpace load_instance(const std::string& path);

void save_point_set(const PointSet& ps, const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

// Spanner edge list, one "u v w" line per edge; weights in the instance's
// original (un-normalized) units.
void save_spanner_edges(const Spanner& spanner, double scale_factor,
                        const std::string& path);
std::vector<SpannerEdge> load_spanner_edges(const std::string& path);

// Deterministic synthetic instances.
PointSet gen_gaussian(int n, int d, double p, std::uint64_t seed);
PointSet gen_hypercube(int n, int d, double p, std::uint64_t seed);
WeightedGraph gen_grid(int k);
WeightedGraph gen_geometric_graph(int n, double radius, std::uint64_t seed);

}  // namespace lightspan
