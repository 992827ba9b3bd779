// Command line front end for the directed preferential attachment toolkit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpa/dpa.hpp"

namespace {

using nlohmann::json;

struct Common {
  double alpha = 0.25, gamma = 0.25, delta_in = 1.0, delta_out = 1.0;
  std::optional<double> beta;  // 1 - alpha - gamma when omitted
  std::size_t edges = 1000;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::string out_dir;
  std::string config;
  std::string seed_graph;  // optional edges.csv for G0
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--alpha", c.alpha, "probability of a new source vertex step");
  app->add_option("--beta", c.beta, "probability of an edge between existing vertices (default 1-alpha-gamma)");
  app->add_option("--gamma", c.gamma, "probability of a new target vertex step");
  app->add_option("--delta-in", c.delta_in, "in-degree shift");
  app->add_option("--delta-out", c.delta_out, "out-degree shift");
  app->add_option("--edges", c.edges, "target edge count t");
  app->add_option("--seed", c.seed, "master random seed");
  app->add_option("--runs", c.runs, "independent runs");
  app->add_option("--out-dir", c.out_dir, "output directory");
  app->add_option("--config", c.config, "JSON config; its keys override the flags");
  app->add_option("--seed-graph", c.seed_graph, "seed graph as src,dst CSV (default: minimal seed)");
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  dpa::require(f.good(), dpa::ErrorCode::io_failure, "cannot open " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw dpa::Error(dpa::ErrorCode::invalid_argument, path + ": " + e.what());
  }
}

dpa::RunConfig resolve_config(const Common& c) {
  dpa::RunConfig cfg;
  cfg.params = {c.alpha, c.beta.value_or(1.0 - c.alpha - c.gamma), c.gamma, c.delta_in, c.delta_out};
  cfg.edges = c.edges;
  cfg.master_seed = c.seed;
  cfg.runs = c.runs;
  cfg.out_dir = c.out_dir;
  if (!c.seed_graph.empty()) {
    auto g = dpa::load_graph(c.seed_graph);
    cfg.seed_graph = dpa::SeedGraph{g.vertex_count(), g.edges()};
  }
  if (!c.config.empty()) {
    json j = json(cfg);
    j["out_dir"] = cfg.out_dir;
    if (!cfg.seed_graph) j.erase("seed_graph");
    j.update(read_json_file(c.config));
    cfg = dpa::run_config_from_json(j);
  }
  return cfg;
}

std::ostream& output_stream(const std::string& dir, const std::string& name, std::ofstream& file) {
  if (dir.empty()) return std::cout;
  std::filesystem::create_directories(dir);
  file.open(std::filesystem::path(dir) / name);
  dpa::require(file.good(), dpa::ErrorCode::io_failure, "cannot write " + name);
  return file;
}

void print_query(const std::string& query, double value, double err, json extra = json::object()) {
  json j = {{"query", query}, {"value", value}, {"abs_err_est", err}};
  j.update(extra);
  std::cout << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed preferential attachment: simulation, limit formulas and exact oracles"};
  app.require_subcommand(1);
  Common common;

  auto* gen = app.add_subcommand("generate", "grow one graph and write edges.csv");
  add_common(gen, common);

  std::string graph_path;
  std::string side = "in";
  auto* deg = app.add_subcommand("degree-dist", "degree histogram of a graph as degree,count CSV");
  deg->add_option("--graph", graph_path, "edges.csv to read")->required();
  deg->add_option("--side", side, "in or out")->check(CLI::IsMember({"in", "out"}));
  deg->add_option("--out-dir", common.out_dir, "write hist.csv here instead of stdout");

  auto* joint = app.add_subcommand("joint", "edge joint counts X(t,d1,d2) as d1,d2,count CSV");
  joint->add_option("--graph", graph_path, "edges.csv to read")->required();
  joint->add_option("--out-dir", common.out_dir, "write joint.csv here instead of stdout");

  std::string query = "derive";
  double d_arg = 0, x_arg = 0, c1 = 1, c2 = 1, r = 1, xi1 = 1, xi2 = 0, xi3 = 1, xi4 = 0, xi5 = 0;
  std::uint64_t d1 = 2, d2 = 2;
  std::string direction = "to_zero", method = "automatic";
  double abs_tol = 1e-10, rel_tol = 1e-8;
  auto* theory = app.add_subcommand("theory", "evaluate a limit formula; prints JSON");
  add_common(theory, common);
  theory
      ->add_option("--query", query,
                   "derive|fbar|f_in|f_out|kappa|kappa_dc2|I1|I2|g|c_X|asymptote")
      ->check(CLI::IsMember({"derive", "fbar", "f_in", "f_out", "kappa", "kappa_dc2", "I1", "I2", "g", "c_X",
                             "asymptote"}));
  theory->add_option("--d", d_arg, "degree");
  theory->add_option("--x", x_arg, "argument x");
  theory->add_option("--c1", c1);
  theory->add_option("--c2", c2);
  theory->add_option("--r", r);
  theory->add_option("--xi1", xi1);
  theory->add_option("--xi2", xi2);
  theory->add_option("--xi3", xi3);
  theory->add_option("--xi4", xi4);
  theory->add_option("--xi5", xi5);
  theory->add_option("--d1", d1);
  theory->add_option("--d2", d2);
  theory->add_option("--direction", direction)->check(CLI::IsMember({"to_zero", "to_infinity"}));
  theory->add_option("--method", method)->check(CLI::IsMember({"automatic", "quadrature", "recursion"}));
  theory->add_option("--abs-tol", abs_tol);
  theory->add_option("--rel-tol", rel_tol);

  std::string kind = "E_in";
  std::size_t T_max = 100, d_max = 10;
  bool mix = false;
  auto* oracle = app.add_subcommand("oracle", "exact dynamic-programming tables as CSV");
  add_common(oracle, common);
  oracle->add_option("--kind", kind)->check(CLI::IsMember({"E_in", "E_out", "D2", "EX"}));
  oracle->add_option("--T-max", T_max);
  oracle->add_option("--d-max", d_max, "largest degree for E tables");
  oracle->add_option("--d1", d1, "first degree for D2/EX");
  oracle->add_option("--d2", d2, "second degree for D2/EX");
  oracle->add_flag("--mix", mix, "emit the binomial mixture over N instead of the conditional table");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo runs with concentration and spread checks; writes report.json");
  add_common(experiment, common);

  std::vector<std::size_t> T_grid{250, 500, 1000};
  std::vector<std::uint64_t> d_grid{0, 1, 2, 3};
  std::vector<std::uint64_t> pair_flat;
  auto* compare = app.add_subcommand("compare", "oracle tables against limit formulas as CSV");
  add_common(compare, common);
  compare->add_option("--T-grid", T_grid)->delimiter(',');
  compare->add_option("--d-grid", d_grid)->delimiter(',');
  compare->add_option("--pairs", pair_flat, "flattened d1,d2 pairs for edge densities")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      auto cfg = resolve_config(common);
      auto g = dpa::generate(cfg.params, cfg.seed(), cfg.edges, cfg.master_seed);
      std::ofstream f;
      dpa::write_graph_csv(g, output_stream(cfg.out_dir, "edges.csv", f));
    } else if (*deg) {
      auto g = dpa::load_graph(graph_path);
      std::ofstream f;
      dpa::write_histogram_csv(dpa::degree_histogram(g, side == "in" ? dpa::Side::in : dpa::Side::out),
                               output_stream(common.out_dir, "hist.csv", f));
    } else if (*joint) {
      auto g = dpa::load_graph(graph_path);
      std::ofstream f;
      dpa::write_joint_csv(dpa::edge_joint_counts(g), output_stream(common.out_dir, "joint.csv", f));
    } else if (*theory) {
      auto cfg = resolve_config(common);
      auto p = dpa::validate_params(cfg.params, cfg.seed()).params;
      auto th = dpa::derive_theory(p);
      dpa::QuadratureSpec q{abs_tol, rel_tol};
      auto m = method == "quadrature" ? dpa::IntegralMethod::quadrature
               : method == "recursion" ? dpa::IntegralMethod::recursion
                                       : dpa::IntegralMethod::automatic;
      auto d = static_cast<std::uint64_t>(d_arg);
      if (query == "derive") {
        json j = {{"query", "derive"},
                  {"cbar_in", th.cbar_in},
                  {"cbar_out", th.cbar_out},
                  {"a", th.a},
                  {"C_in", th.C_in ? json(*th.C_in) : json(nullptr)},
                  {"regime", dpa::to_string(th.regime)}};
        std::cout << j.dump() << '\n';
      } else if (query == "fbar") {
        print_query(query, dpa::fbar(d, th), 0.0, {{"d", d}});
      } else if (query == "f_in") {
        print_query(query, dpa::f_in(d, x_arg, p), 0.0, {{"d", d}, {"x", x_arg}});
      } else if (query == "f_out") {
        print_query(query, dpa::f_out(d, x_arg, p), 0.0, {{"d", d}, {"x", x_arg}});
      } else if (query == "kappa" || query == "kappa_dc2") {
        auto res = query == "kappa" ? dpa::kappa(c1, c2, r, x_arg, q) : dpa::kappa_dc2(c1, c2, r, x_arg, q);
        print_query(query, res.value, res.abs_err);
      } else if (query == "I1") {
        auto res = dpa::I1(c1, c2, xi1, xi2, xi3, xi4, q, m);
        print_query(query, res.value, res.abs_err);
      } else if (query == "I2") {
        auto res = dpa::I2(c1, c2, xi1, xi2, xi3, xi4, xi5, q, m);
        print_query(query, res.value, res.abs_err);
      } else if (query == "g") {
        auto parts = dpa::g_edge_parts(x_arg, d1, d2, p, q, m);
        print_query(query, parts.total(), parts.abs_err, {{"g1", parts.g1}, {"g2", parts.g2}, {"g3", parts.g3}});
      } else if (query == "c_X") {
        auto cx = dpa::c_X(d1, d2, th, q);
        print_query(query, cx.total(), cx.abs_err,
                    {{"c_X1", cx.cx1}, {"c_X2", cx.cx2}, {"c_X3", cx.cx3}, {"logarithmic_branch", cx.logarithmic_branch}});
      } else if (query == "asymptote") {
        auto a = dpa::c_X_asymptote(d1, d2, th,
                                    direction == "to_zero" ? dpa::LimitDirection::to_zero
                                                           : dpa::LimitDirection::to_infinity);
        print_query(query, a.value, 0.0, {{"constant", a.constant}, {"constant_name", a.constant_name}, {"profile", a.profile}});
      }
    } else if (*oracle) {
      auto cfg = resolve_config(common);
      auto seed = cfg.seed();
      std::ofstream f;
      auto& out = output_stream(cfg.out_dir, "table_" + kind + ".csv", f);
      out.precision(17);
      dpa::DPTable table;
      bool pair_kind = kind == "D2" || kind == "EX";
      if (kind == "E_in") table = dpa::dp_E_in(cfg.params, seed, T_max, d_max);
      if (kind == "E_out") table = dpa::dp_E_out(cfg.params, seed, T_max, d_max);
      if (kind == "D2") table = dpa::dp_D2(cfg.params, seed, T_max, d1, d2);
      if (kind == "EX") table = dpa::dp_EX(cfg.params, seed, T_max, d1, d2);
      if (mix) {
        out << (pair_kind ? "T,value\n" : "T,d,value\n");
        for (auto T : table.snapshot_times()) {
          if (pair_kind) {
            out << T << ',' << dpa::mix_binomial(table, cfg.params, T, d1, d2) << '\n';
          } else {
            for (std::size_t d = 0; d <= d_max; ++d)
              out << T << ',' << d << ',' << dpa::mix_binomial(table, cfg.params, T, d) << '\n';
          }
        }
      } else {
        out << (pair_kind ? "T,N,value\n" : "T,N,d,value\n");
        for (auto T : table.snapshot_times()) {
          for (std::size_t N = 0; N <= T; ++N) {
            if (pair_kind) {
              out << T << ',' << N << ',' << table.at(T, N, d1, d2) << '\n';
            } else {
              for (std::size_t d = 0; d <= d_max; ++d) out << T << ',' << N << ',' << d << ',' << table.at(T, N, d) << '\n';
            }
          }
        }
      }
    } else if (*experiment) {
      auto cfg = resolve_config(common);
      if (cfg.out_dir.empty()) cfg.out_dir = "experiment_out";
      auto rep = dpa::run_experiment(cfg);
      std::cout << dpa::report_json(rep).dump(2) << '\n';
    } else if (*compare) {
      auto cfg = resolve_config(common);
      dpa::require(pair_flat.size() % 2 == 0, dpa::ErrorCode::invalid_argument, "--pairs needs an even count");
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (std::size_t k = 0; k < pair_flat.size(); k += 2) pairs.emplace_back(pair_flat[k], pair_flat[k + 1]);
      auto table = dpa::compare_theory_vs_oracle(cfg.params, cfg.seed(), T_grid, d_grid, pairs);
      std::ofstream f;
      auto& out = output_stream(cfg.out_dir, "compare.csv", f);
      out.precision(12);
      out << "kind,T,N,d1,d2,oracle,theory,abs_diff\n";
      for (const auto& r : table.degree_rows)
        out << "degree," << r.T << ',' << r.N << ',' << r.d1 << ",," << r.oracle << ',' << r.theory << ',' << r.abs_diff << '\n';
      for (const auto& r : table.edge_rows)
        out << "edge," << r.T << ',' << r.N << ',' << r.d1 << ',' << r.d2 << ',' << r.oracle << ',' << r.theory << ','
            << r.abs_diff << '\n';
      std::cerr << (table.nonincreasing() ? "differences nonincreasing in T\n" : "differences not monotone in T\n");
    }
  } catch (const dpa::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
