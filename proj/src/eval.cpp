#include "lightspan/eval.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace lightspan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<std::pair<int, double>>> spanner_adjacency(
    const Spanner& spanner) {
  std::vector<std::vector<std::pair<int, double>>> adj(spanner.n);
  for (const auto& e : spanner.edges) {
    adj[e.u].emplace_back(e.v, e.w);
    adj[e.v].emplace_back(e.u, e.w);
  }
  return adj;
}

}  // namespace

StretchResult verify_stretch(const MetricSpace& space, const Spanner& spanner,
                             double bound) {
  StretchResult res;
  const int n = space.size();
  if (n < 2) {
    res.max_stretch = 1.0;
    res.pass = true;
    return res;
  }
  auto adj = spanner_adjacency(spanner);

  auto consider = [&](int u, int v, double dh) {
    const double dx = space.distance(u, v);
    const double stretch = dh / dx;
    if (stretch > res.max_stretch || res.worst_u < 0) {
      res.max_stretch = stretch;
      res.worst_u = u;
      res.worst_v = v;
    }
  };

  if (n <= 4096) {
    for (int s = 0; s < n; ++s) {
      auto dist = dijkstra(adj, s);
      for (int v = s + 1; v < n; ++v) consider(s, v, dist[v]);
    }
  } else {
    Rng rng(0xe7a1);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int it = 0; it < 10'000; ++it) {
      int u = pick(rng), v = pick(rng);
      if (u == v) continue;
      auto dist = dijkstra(adj, u);
      consider(u, v, dist[v]);
    }
  }
  res.pass = res.max_stretch <= bound * (1.0 + kRelTol) && std::isfinite(res.max_stretch);
  return res;
}

double lightness(const Spanner& spanner, const MstSummary& mst) {
  if (mst.weight_L == 0.0) return 1.0;
  double total = 0.0;
  for (const auto& e : spanner.edges) total += e.w;
  return total / mst.weight_L;
}

int sparsity(const Spanner& spanner) { return static_cast<int>(spanner.edges.size()); }

EvalReport assemble_report(const MetricSpace& space, const Spanner& spanner,
                           const MstSummary& mst, double t, double eps,
                           std::optional<double> scheme_delta,
                           double build_millis, double eval_millis) {
  EvalReport rep;
  rep.n = space.size();
  rep.t = t;
  rep.eps = eps;
  rep.alpha = effective_stretch(eps, t);
  auto stretch = verify_stretch(space, spanner, rep.alpha);
  rep.max_stretch_measured = stretch.max_stretch;
  rep.worst_u = stretch.worst_u;
  rep.worst_v = stretch.worst_v;
  rep.lightness = lightness(spanner, mst);
  rep.edge_count = sparsity(spanner);
  rep.build_log = spanner.build_log;
  if (scheme_delta) rep.nu = std::pow(1.0 / *scheme_delta, t);
  rep.build_millis = build_millis;
  rep.eval_millis = eval_millis;
  return rep;
}

std::string report_to_json(const EvalReport& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["t"] = rep.t;
  j["eps"] = rep.eps;
  j["alpha"] = rep.alpha;
  j["max_stretch_measured"] = rep.max_stretch_measured;
  j["worst_pair"] = {rep.worst_u, rep.worst_v};
  j["lightness"] = rep.lightness;
  j["edge_count"] = rep.edge_count;
  if (rep.nu) j["nu"] = *rep.nu;
  j["build_millis"] = rep.build_millis;
  j["eval_millis"] = rep.eval_millis;
  j["build_log"] = nlohmann::json::array();
  for (const auto& s : rep.build_log) {
    j["build_log"].push_back({{"i", s.i},
                              {"delta_i", s.delta_i},
                              {"n_i", s.n_i},
                              {"phi_i", s.phi},
                              {"resample_rounds", s.resample_rounds},
                              {"edges_added", s.edges_added},
                              {"weight_added", s.weight_added}});
  }
  return j.dump(2);
}

EvalReport report_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  EvalReport rep;
  rep.n = j.at("n");
  rep.t = j.at("t");
  rep.eps = j.at("eps");
  rep.alpha = j.at("alpha");
  rep.max_stretch_measured = j.at("max_stretch_measured");
  rep.worst_u = j.at("worst_pair")[0];
  rep.worst_v = j.at("worst_pair")[1];
  rep.lightness = j.at("lightness");
  rep.edge_count = j.at("edge_count");
  if (j.contains("nu")) rep.nu = j.at("nu").get<double>();
  rep.build_millis = j.at("build_millis");
  rep.eval_millis = j.at("eval_millis");
  for (const auto& s : j.at("build_log")) {
    ScaleLog log;
    log.i = s.at("i");
    log.delta_i = s.at("delta_i");
    log.n_i = s.at("n_i");
    log.phi = s.at("phi_i");
    log.resample_rounds = s.at("resample_rounds");
    log.edges_added = s.at("edges_added");
    log.weight_added = s.at("weight_added");
    rep.build_log.push_back(log);
  }
  return rep;
}

std::string report_csv_header() {
  return "t,seed,edges,lightness,max_stretch,alpha,millis";
}

std::string report_to_csv_row(const EvalReport& rep, std::uint64_t seed) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << rep.t << ',' << seed << ',' << rep.edge_count << ',' << rep.lightness << ','
     << rep.max_stretch_measured << ',' << rep.alpha << ','
     << (rep.build_millis + rep.eval_millis);
  return os.str();
}

}  // namespace lightspan
