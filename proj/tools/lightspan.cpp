#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lightspan/decomp.hpp"
#include "lightspan/eval.hpp"
#include "lightspan/io.hpp"
#include "lightspan/metric.hpp"
#include "lightspan/spanner.hpp"

namespace {

using namespace lightspan;

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << text << '\n';
}

struct BuildResult {
  Spanner spanner;
  MetricSpace space;
  double millis = 0.0;
};

BuildResult run_build(const std::string& input, const std::string& scheme_name,
                      double t, double eps, std::optional<double> beta,
                      std::optional<double> delta, std::uint64_t seed) {
  MetricSpace space = normalize(load_instance(input));
  SchemeParams params{t, delta};
  auto scheme = make_scheme(scheme_name, params);
  Rng rng = make_rng(seed, "build");
  const double t0 = now_ms();
  Spanner h;
  if (space.is_graph() && scheme_name == "strong-graph") {
    h = build_graph_spanner(space, *scheme, eps, rng);
  } else if (beta) {
    h = build_spanner_subset_decomposable(space, *scheme, eps, *beta, rng);
  } else {
    h = build_spanner(space, *scheme, eps, rng);
  }
  return BuildResult{std::move(h), std::move(space), now_ms() - t0};
}

std::string build_log_json(const Spanner& h) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : h.build_log) {
    j.push_back({{"i", s.i},
                 {"delta_i", s.delta_i},
                 {"n_i", s.n_i},
                 {"phi_i", s.phi},
                 {"resample_rounds", s.resample_rounds},
                 {"edges_added", s.edges_added},
                 {"weight_added", s.weight_added}});
  }
  return j.dump(2);
}

int run(int argc, char** argv) {
  CLI::App app{"Light spanners from stochastic metric decompositions"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance file");
  std::vector<std::string> gen_spec;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("spec", gen_spec,
                  "gaussian n d p | hypercube n d p | grid k | geometric-graph n radius")
      ->expected(-1);
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--out", gen_out, "output file")->required();

  // build
  auto* build = app.add_subcommand("build", "build a spanner");
  std::string b_in, b_scheme = "random-shift", b_out, b_log;
  double b_t = 3.0, b_eps = 0.1;
  std::optional<double> b_beta, b_delta;
  std::uint64_t b_seed = 0;
  build->add_option("--in", b_in)->required();
  build->add_option("--scheme", b_scheme,
                    "ball-carving | lsh-pstable | random-shift | strong-graph");
  build->add_option("--t", b_t);
  build->add_option("--eps", b_eps);
  build->add_option("--beta", b_beta, "subset-decomposable exponent");
  build->add_option("--delta", b_delta, "numeric scheme delta (default: adaptive)");
  build->add_option("--seed", b_seed);
  build->add_option("--out", b_out, "spanner edge list")->required();
  build->add_option("--log", b_log, "build log JSON (default <out>.log.json)");

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a spanner against its instance");
  std::string e_in, e_spanner, e_out, e_format = "json";
  double e_t = 3.0, e_eps = 0.1;
  std::optional<double> e_delta;
  ev->add_option("--in", e_in)->required();
  ev->add_option("--spanner", e_spanner)->required();
  ev->add_option("--t", e_t);
  ev->add_option("--eps", e_eps);
  ev->add_option("--delta", e_delta, "numeric delta, reported as nu = 1/delta^t");
  ev->add_option("--format", e_format)->check(CLI::IsMember({"json", "csv"}));
  ev->add_option("--out", e_out, "output path (default stdout)");
  bool e_timing = false;
  ev->add_flag("--timing", e_timing,
               "record wall times (off by default so outputs are byte-reproducible)");

  // decomp-probe
  auto* probe = app.add_subcommand("decomp-probe", "measure co-clustering probabilities");
  std::string p_in, p_scheme = "random-shift", p_out;
  double p_t = 3.0, p_delta_scale = 1.0;
  int p_trials = 200, p_pairs = 20;
  std::uint64_t p_seed = 0;
  probe->add_option("--in", p_in)->required();
  probe->add_option("--scheme", p_scheme);
  probe->add_option("--t", p_t);
  probe->add_option("--delta-scale", p_delta_scale, "the scale Delta");
  probe->add_option("--trials", p_trials);
  probe->add_option("--pairs", p_pairs);
  probe->add_option("--seed", p_seed);
  probe->add_option("--out", p_out);

  // bench
  auto* bench = app.add_subcommand("bench", "t/seed sweep emitting CSV");
  std::string bn_in, bn_scheme = "ball-carving", bn_out;
  std::vector<double> bn_ts{2, 3, 5, 8};
  std::vector<std::uint64_t> bn_seeds{1, 2, 3};
  double bn_eps = 0.1;
  bench->add_option("--in", bn_in)->required();
  bench->add_option("--scheme", bn_scheme);
  bench->add_option("--t", bn_ts, "stretch parameters to sweep");
  bench->add_option("--seeds", bn_seeds);
  bench->add_option("--eps", bn_eps);
  bench->add_option("--out", bn_out, "CSV output")->required();
  bool bn_timing = false;
  bench->add_flag("--timing", bn_timing,
                  "record wall times (off by default so outputs are byte-reproducible)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    if (gen_spec.empty()) throw InvalidInputError("missing generator spec");
    const std::string kind = gen_spec[0];
    if (kind == "gaussian" || kind == "hypercube") {
      if (gen_spec.size() != 4) throw InvalidInputError(kind + " needs: n d p");
      int n = std::stoi(gen_spec[1]), d = std::stoi(gen_spec[2]);
      double p = std::stod(gen_spec[3]);
      PointSet ps = kind == "gaussian" ? gen_gaussian(n, d, p, gen_seed)
                                       : gen_hypercube(n, d, p, gen_seed);
      save_point_set(ps, gen_out);
    } else if (kind == "grid") {
      if (gen_spec.size() != 2) throw InvalidInputError("grid needs: k");
      save_graph(gen_grid(std::stoi(gen_spec[1])), gen_out);
    } else if (kind == "geometric-graph") {
      if (gen_spec.size() != 3) throw InvalidInputError("geometric-graph needs: n radius");
      save_graph(gen_geometric_graph(std::stoi(gen_spec[1]), std::stod(gen_spec[2]),
                                     gen_seed),
                 gen_out);
    } else {
      throw InvalidInputError("unknown generator kind: " + kind);
    }
    return 0;
  }

  if (build->parsed()) {
    auto result = run_build(b_in, b_scheme, b_t, b_eps, b_beta, b_delta, b_seed);
    save_spanner_edges(result.spanner, result.space.scale_factor(), b_out);
    write_text(b_log.empty() ? b_out + ".log.json" : b_log,
               build_log_json(result.spanner));
    return 0;
  }

  if (ev->parsed()) {
    MetricSpace space = normalize(load_instance(e_in));
    Spanner h;
    h.n = space.size();
    for (auto e : load_spanner_edges(e_spanner)) {
      e.w *= space.scale_factor();
      h.edges.push_back(e);
    }
    const double t0 = now_ms();
    MstSummary tree = mst(space);
    EvalReport rep =
        assemble_report(space, h, tree, e_t, e_eps, e_delta, 0.0, 0.0);
    if (e_timing) rep.eval_millis = now_ms() - t0;
    write_text(e_out, e_format == "json"
                          ? report_to_json(rep)
                          : report_csv_header() + "\n" + report_to_csv_row(rep, 0));
    const double alpha = effective_stretch(e_eps, e_t);
    if (!(rep.max_stretch_measured <= alpha * (1.0 + kRelTol))) {
      throw VerificationError("max stretch " + std::to_string(rep.max_stretch_measured) +
                              " exceeds alpha " + std::to_string(alpha));
    }
    return 0;
  }

  if (probe->parsed()) {
    MetricSpace space = normalize(load_instance(p_in));
    auto scheme = make_scheme(p_scheme, SchemeParams{p_t, std::nullopt});
    Rng rng = make_rng(p_seed, "decomp-probe");
    std::vector<std::pair<int, int>> close;
    for (int i = 0; i < space.size(); ++i) {
      for (int j = i + 1; j < space.size(); ++j) {
        if (space.distance(i, j) <= p_delta_scale * (1.0 + kRelTol)) {
          close.emplace_back(i, j);
        }
      }
    }
    if (close.size() > static_cast<size_t>(p_pairs)) {
      std::shuffle(close.begin(), close.end(), rng);
      close.resize(p_pairs);
    }
    nlohmann::json j = nlohmann::json::array();
    for (auto [x, y] : close) {
      auto est = empirical_cluster_probability(*scheme, space, x, y, p_delta_scale,
                                               p_trials, rng);
      nlohmann::json row{{"x", x},
                         {"y", y},
                         {"distance", space.distance(x, y)},
                         {"estimate", est.estimate},
                         {"std_error", est.std_error}};
      if (p_scheme == "ball-carving") {
        Rng mc = make_rng(p_seed, "cap-ratio", static_cast<std::uint64_t>(x) << 32 | y);
        row["cap_ratio_half"] =
            cap_ratio_mc(space.points().dim(), space.distance(x, y),
                         p_t * p_delta_scale / 2.0, 10'000, mc) /
            2.0;
      }
      j.push_back(row);
    }
    write_text(p_out, j.dump(2));
    return 0;
  }

  if (bench->parsed()) {
    std::ofstream out(bn_out);
    if (!out) throw InvalidInputError("cannot write " + bn_out);
    out << report_csv_header() << '\n';
    for (double t : bn_ts) {
      for (std::uint64_t seed : bn_seeds) {
        auto result = run_build(bn_in, bn_scheme, t, bn_eps, std::nullopt,
                                std::nullopt, seed);
        const double t0 = now_ms();
        MstSummary tree = mst(result.space);
        EvalReport rep =
            assemble_report(result.space, result.spanner, tree, t, bn_eps,
                            std::nullopt, bn_timing ? result.millis : 0.0, 0.0);
        if (bn_timing) rep.eval_millis = now_ms() - t0;
        out << report_to_csv_row(rep, seed) << '\n';
        if (!(rep.max_stretch_measured <= rep.alpha * (1.0 + kRelTol))) {
          throw VerificationError("bench cell t=" + std::to_string(t) +
                                  " failed its stretch bound");
        }
      }
    }
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CapExceededError& e) {
    std::cerr << "error (cap exceeded): " << e.what() << '\n';
    return 4;
  } catch (const VerificationError& e) {
    std::cerr << "error (verification): " << e.what() << '\n';
    return 3;
  } catch (const InvalidInputError& e) {
    std::cerr << "error (invalid input): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
