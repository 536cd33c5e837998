#pragma once

#include <optional>
#include <string>

#include "lightspan/metric.hpp"
#include "lightspan/spanner.hpp"

namespace lightspan {

struct StretchResult {
  double max_stretch = 1.0;
  int worst_u = -1;
  int worst_v = -1;
  bool pass = false;
};

// Exact single-source shortest paths from every vertex over the spanner
// adjacency (random-pair sampling above n = 4096). A disconnected pair
// fails with infinite stretch.
StretchResult verify_stretch(const MetricSpace& space, const Spanner& spanner,
                             double bound);

// Total spanner weight over the MST weight L; defined as 1 when L = 0.
double lightness(const Spanner& spanner, const MstSummary& mst);

int sparsity(const Spanner& spanner);

struct EvalReport {
  int n = 0;
  double t = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  double max_stretch_measured = 0.0;
  int worst_u = -1;
  int worst_v = -1;
  double lightness = 0.0;
  int edge_count = 0;
  std::vector<ScaleLog> build_log;
  std::optional<double> nu;  // 1/delta^t when the scheme's delta is numeric
  double build_millis = 0.0;
  double eval_millis = 0.0;
};

EvalReport assemble_report(const MetricSpace& space, const Spanner& spanner,
                           const MstSummary& mst, double t, double eps,
                           std::optional<double> scheme_delta,
                           double build_millis, double eval_millis);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& json_text);

std::string report_csv_header();
std::string report_to_csv_row(const EvalReport& report, std::uint64_t seed);

}  // namespace lightspan
