// Monte Carlo experiments, concentration and spread checks, and theory-versus-oracle comparisons.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "generator.hpp"
#include "oracle.hpp"
#include "stats.hpp"
#include "theory.hpp"

namespace dpa {

inline constexpr std::string_view kVersion = "1.0.0";

struct Theorem2Options {
  bool enabled = true;
  double epsilon = 0.1;
  double threshold = 0.95;
  double min_expected = 1.0;  // only degrees with f̄(d)·t at least this are scored
};

struct Theorem4Options {
  bool enabled = true;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs{{2, 2}};
};

struct RunConfig {
  ModelParams params;
  std::optional<SeedGraph> seed_graph;
  std::size_t edges = 0;
  std::size_t runs = 1;
  std::uint64_t master_seed = 1;
  std::string out_dir;
  std::size_t threads = 0;  // 0 picks the hardware concurrency
  std::uint64_t degree_rows_max = 20;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> x_pairs{{1, 1}, {2, 2}};
  Theorem2Options theorem2;
  Theorem4Options theorem4;
  QuadratureSpec quadrature;

  SeedGraph seed() const { return seed_graph ? *seed_graph : default_seed(params); }
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  auto pairs = [](const auto& v) {
    auto a = nlohmann::json::array();
    for (const auto& [d1, d2] : v) a.push_back({d1, d2});
    return a;
  };
  j = nlohmann::json{{"params", c.params},
                     {"seed_graph", c.seed()},
                     {"edges", c.edges},
                     {"runs", c.runs},
                     {"master_seed", c.master_seed},
                     {"degree_rows_max", c.degree_rows_max},
                     {"x_pairs", pairs(c.x_pairs)},
                     {"theorem2",
                      {{"enabled", c.theorem2.enabled},
                       {"epsilon", c.theorem2.epsilon},
                       {"threshold", c.theorem2.threshold},
                       {"min_expected", c.theorem2.min_expected}}},
                     {"theorem4", {{"enabled", c.theorem4.enabled}, {"pairs", pairs(c.theorem4.pairs)}}},
                     {"quadrature", {{"abs_tol", c.quadrature.abs_tol}, {"rel_tol", c.quadrature.rel_tol}}}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  try {
    c.params = j.at("params").get<ModelParams>();
    if (j.contains("seed_graph") && !j.at("seed_graph").is_null()) c.seed_graph = j.at("seed_graph").get<SeedGraph>();
    c.edges = j.at("edges").get<std::size_t>();
    c.runs = j.value("runs", std::size_t{1});
    c.master_seed = j.value("master_seed", std::uint64_t{1});
    c.out_dir = j.value("out_dir", std::string{});
    c.threads = j.value("threads", std::size_t{0});
    c.degree_rows_max = j.value("degree_rows_max", c.degree_rows_max);
    auto read_pairs = [](const nlohmann::json& a) {
      std::vector<std::pair<std::uint64_t, std::uint64_t>> v;
      for (const auto& e : a) v.emplace_back(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>());
      return v;
    };
    if (j.contains("x_pairs")) c.x_pairs = read_pairs(j.at("x_pairs"));
    if (j.contains("theorem2")) {
      const auto& t = j.at("theorem2");
      c.theorem2.enabled = t.value("enabled", true);
      c.theorem2.epsilon = t.value("epsilon", 0.1);
      c.theorem2.threshold = t.value("threshold", 0.95);
      c.theorem2.min_expected = t.value("min_expected", 1.0);
    }
    if (j.contains("theorem4")) {
      const auto& t = j.at("theorem4");
      c.theorem4.enabled = t.value("enabled", true);
      if (t.contains("pairs")) c.theorem4.pairs = read_pairs(t.at("pairs"));
    }
    if (j.contains("quadrature")) {
      c.quadrature.abs_tol = j.at("quadrature").value("abs_tol", c.quadrature.abs_tol);
      c.quadrature.rel_tol = j.at("quadrature").value("rel_tol", c.quadrature.rel_tol);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("bad config: ") + e.what());
  }
  return c;
}

inline void validate_run_config(const RunConfig& c) {
  auto seed = c.seed();
  validate_params(c.params, seed);
  require(c.runs >= 1, ErrorCode::invalid_argument, "runs must be at least 1");
  require(c.edges >= seed.t0(), ErrorCode::invalid_argument, "edges must be at least the seed edge count");
}

/// Per-run statistics gathered from one trajectory.
struct RunStats {
  DegreeHistogram in_hist;
  DegreeHistogram out_hist;
  EdgeDegreeJointCounts joint;
  std::size_t vertices = 0;
};

struct SampleSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1 denominator)
  double max_abs_dev = 0.0;
};

inline SampleSummary summarize(const std::vector<double>& xs) {
  SampleSummary s;
  if (xs.empty()) return s;
  double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  double ss = 0.0;
  for (double x : xs) {
    ss += (x - s.mean) * (x - s.mean);
    s.max_abs_dev = std::max(s.max_abs_dev, std::abs(x - s.mean));
  }
  s.std = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return s;
}

struct Theorem2Result {
  bool skipped = false;
  std::string notice;
  double fraction = 0.0;
  std::size_t pairs_checked = 0;
  std::size_t pairs_satisfied = 0;
};

/// Fraction of (run, d) pairs with |n_in(t,d) - f̄(d)t| ≤ (sqrt(f̄(d)t) + (d+1)^(-1/2+ε))·ln t.
inline Theorem2Result check_theorem2(const std::vector<DegreeHistogram>& histograms, const TheoryParams& th,
                                     std::size_t t, const Theorem2Options& opt = {}) {
  require(!histograms.empty(), ErrorCode::invalid_argument, "check_theorem2 needs at least one run");
  Theorem2Result r;
  if (!th.C_in) {
    r.skipped = true;
    r.notice = "cbar_in is degenerate (" + std::to_string(th.cbar_in) + "); no limit density to compare";
    return r;
  }
  double tt = static_cast<double>(t);
  double lt = std::log(tt);
  std::vector<std::pair<std::uint64_t, double>> scored;
  for (std::uint64_t d = 0;; ++d) {
    double expected = fbar(d, th) * tt;
    if (expected < opt.min_expected) {
      if (d > 2) break;  // f̄ is decreasing past its first terms
      continue;
    }
    scored.emplace_back(d, expected);
  }
  for (const auto& h : histograms) {
    for (const auto& [d, expected] : scored) {
      double bound = (std::sqrt(expected) + std::pow(static_cast<double>(d) + 1.0, -0.5 + opt.epsilon)) * lt;
      ++r.pairs_checked;
      if (std::abs(static_cast<double>(h.at(d)) - expected) <= bound) ++r.pairs_satisfied;
    }
  }
  r.fraction = r.pairs_checked ? static_cast<double>(r.pairs_satisfied) / static_cast<double>(r.pairs_checked) : 1.0;
  return r;
}

struct Theorem4Result {
  double std = 0.0;
  double max_dev = 0.0;
  double bound = 0.0;
  bool flag = false;
};

/// Spread of X(t,d1,d2) across runs against sqrt(t)·ln t.
inline Theorem4Result check_theorem4(const std::vector<double>& x_values, std::size_t t) {
  require(x_values.size() >= 10, ErrorCode::invalid_argument, "check_theorem4 needs at least 10 runs");
  auto s = summarize(x_values);
  Theorem4Result r;
  r.std = s.std;
  r.max_dev = s.max_abs_dev;
  r.bound = std::sqrt(static_cast<double>(t)) * std::log(static_cast<double>(t));
  r.flag = r.max_dev < r.bound;
  return r;
}

struct DegreeRow {
  std::uint64_t d = 0;
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> theory;
  std::optional<double> z;
};

struct XRow {
  std::uint64_t d1 = 0, d2 = 0;
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> theory;
  std::optional<double> z;
};

struct Theorem4Row {
  std::uint64_t d1 = 0, d2 = 0;
  Theorem4Result result;
};

struct ComparisonReport {
  RunConfig config;
  std::vector<DegreeRow> degree_rows;
  std::vector<XRow> x_rows;
  std::optional<Theorem2Result> theorem2;
  std::vector<Theorem4Row> theorem4;
  std::string theorem4_notice;
  std::vector<std::string> notices;
  double generation_seconds = 0.0;
  double total_seconds = 0.0;
  std::vector<RunStats> runs;  // kept for callers, not serialized
};

namespace detail {

inline nlohmann::json optional_json(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

}  // namespace detail

/// Report body without the timing block; identical configs give identical bodies.
inline nlohmann::json report_body_json(const ComparisonReport& r) {
  nlohmann::json j;
  j["metadata"] = {{"version", kVersion}, {"config", r.config}};
  auto rows = nlohmann::json::array();
  for (const auto& row : r.degree_rows) {
    rows.push_back({{"d", row.d},
                    {"empirical_mean", row.mean},
                    {"empirical_std", row.std},
                    {"theory", detail::optional_json(row.theory)},
                    {"z", detail::optional_json(row.z)}});
  }
  j["degree_rows"] = rows;
  auto xr = nlohmann::json::array();
  for (const auto& row : r.x_rows) {
    xr.push_back({{"d1", row.d1},
                  {"d2", row.d2},
                  {"empirical_mean", row.mean},
                  {"empirical_std", row.std},
                  {"theory", detail::optional_json(row.theory)},
                  {"z", detail::optional_json(row.z)}});
  }
  j["x_rows"] = xr;
  if (r.theorem2) {
    const auto& t = *r.theorem2;
    j["theorem2"] = {{"skipped", t.skipped},
                     {"notice", t.notice},
                     {"epsilon", r.config.theorem2.epsilon},
                     {"threshold", r.config.theorem2.threshold},
                     {"fraction", t.fraction},
                     {"pairs_checked", t.pairs_checked},
                     {"meets_threshold", !t.skipped && t.fraction >= r.config.theorem2.threshold}};
  } else {
    j["theorem2"] = nullptr;
  }
  auto t4 = nlohmann::json::array();
  for (const auto& row : r.theorem4) {
    t4.push_back({{"d1", row.d1},
                  {"d2", row.d2},
                  {"std", row.result.std},
                  {"max_dev", row.result.max_dev},
                  {"bound", row.result.bound},
                  {"flag", row.result.flag}});
  }
  j["theorem4"] = {{"rows", t4}, {"notice", r.theorem4_notice}};
  j["notices"] = r.notices;
  return j;
}

inline nlohmann::json report_json(const ComparisonReport& r) {
  auto j = report_body_json(r);
  auto now = std::chrono::system_clock::now();
  j["timing"] = {{"generation_seconds", r.generation_seconds},
                 {"total_seconds", r.total_seconds},
                 {"finished_unix", std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()}};
  return j;
}

/// Generates one trajectory per run on a worker pool and folds results in run order.
inline std::vector<RunStats> simulate_runs(const RunConfig& cfg) {
  auto seed = cfg.seed();
  std::vector<RunStats> out(cfg.runs);
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cfg.runs) return;
      try {
        auto g = generate(cfg.params, seed, cfg.edges, cfg.master_seed, i);
        out[i] = RunStats{degree_histogram(g, Side::in), degree_histogram(g, Side::out), edge_joint_counts(g),
                          g.vertex_count()};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

inline bool params_all_positive(const ModelParams& p) {
  return p.alpha > 0 && p.beta > 0 && p.gamma > 0 && p.delta_in > 0 && p.delta_out > 0;
}

inline ComparisonReport build_report(const RunConfig& cfg, std::vector<RunStats> runs) {
  ComparisonReport rep;
  rep.config = cfg;
  auto th = derive_theory(validate_params(cfg.params, cfg.seed()).params);
  double t = static_cast<double>(cfg.edges);
  double sqrt_runs = std::sqrt(static_cast<double>(runs.size()));

  for (std::uint64_t d = 0; d <= cfg.degree_rows_max; ++d) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(static_cast<double>(r.in_hist.at(d)));
    auto s = summarize(xs);
    DegreeRow row{d, s.mean, s.std, std::nullopt, std::nullopt};
    if (th.C_in && cfg.edges > 0) {
      row.theory = fbar(d, th) * t;
      if (s.std > 0) row.z = (s.mean - *row.theory) / (s.std / sqrt_runs);
    }
    rep.degree_rows.push_back(row);
  }
  if (!th.C_in) rep.notices.push_back("cbar_in degenerate: no in-degree limit density");

  bool edge_theory = params_all_positive(th.model);
  if (!edge_theory) rep.notices.push_back("edge density theory needs all parameters positive; x_rows carry no theory");
  for (const auto& [d1, d2] : cfg.x_pairs) {
    std::vector<double> xs;
    for (const auto& r : runs) xs.push_back(static_cast<double>(r.joint.at(d1, d2)));
    auto s = summarize(xs);
    XRow row{d1, d2, s.mean, s.std, std::nullopt, std::nullopt};
    if (edge_theory && d1 >= 1 && d2 >= 1) {
      row.theory = g_edge_density(th.model.alpha + th.model.gamma, d1, d2, th.model, cfg.quadrature) * t;
      if (s.std > 0) row.z = (s.mean - *row.theory) / (s.std / sqrt_runs);
    }
    rep.x_rows.push_back(row);
  }

  if (cfg.theorem2.enabled && cfg.edges >= 2) {
    std::vector<DegreeHistogram> hs;
    for (const auto& r : runs) hs.push_back(r.in_hist);
    rep.theorem2 = check_theorem2(hs, th, cfg.edges, cfg.theorem2);
  }
  if (cfg.theorem4.enabled) {
    if (runs.size() < 10) {
      rep.theorem4_notice = "spread check needs at least 10 runs";
    } else {
      for (const auto& [d1, d2] : cfg.theorem4.pairs) {
        std::vector<double> xs;
        for (const auto& r : runs) xs.push_back(static_cast<double>(r.joint.at(d1, d2)));
        rep.theorem4.push_back({d1, d2, check_theorem4(xs, cfg.edges)});
      }
    }
  }
  rep.runs = std::move(runs);
  return rep;
}

inline DegreeHistogram pooled_histogram(const std::vector<RunStats>& runs, Side side) {
  DegreeHistogram h;
  h.side = side;
  for (const auto& r : runs) {
    const auto& src = side == Side::in ? r.in_hist : r.out_hist;
    for (const auto& [d, c] : src.counts) h.counts[d] += c;
    h.n_total += src.n_total;
  }
  return h;
}

inline EdgeDegreeJointCounts pooled_joint(const std::vector<RunStats>& runs) {
  EdgeDegreeJointCounts j;
  for (const auto& r : runs) {
    for (const auto& [k, c] : r.joint.counts) j.counts[k] += c;
    j.loop_count += r.joint.loop_count;
  }
  return j;
}

/// Writes report.json, hist.csv, hist_out.csv and joint.csv (counts pooled over runs) into dir.
inline void write_report_files(const ComparisonReport& rep, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io_failure, "cannot create " + dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(std::filesystem::path(dir) / name);
    require(f.good(), ErrorCode::io_failure, "cannot write " + name);
    return f;
  };
  {
    auto f = open("report.json");
    f << report_json(rep).dump(2) << '\n';
  }
  {
    auto f = open("hist.csv");
    write_histogram_csv(pooled_histogram(rep.runs, Side::in), f);
  }
  {
    auto f = open("hist_out.csv");
    write_histogram_csv(pooled_histogram(rep.runs, Side::out), f);
  }
  {
    auto f = open("joint.csv");
    write_joint_csv(pooled_joint(rep.runs), f);
  }
}

inline ComparisonReport run_experiment(const RunConfig& cfg) {
  validate_run_config(cfg);
  auto t0 = std::chrono::steady_clock::now();
  auto runs = simulate_runs(cfg);
  auto t1 = std::chrono::steady_clock::now();
  auto rep = build_report(cfg, std::move(runs));
  auto t2 = std::chrono::steady_clock::now();
  rep.generation_seconds = std::chrono::duration<double>(t1 - t0).count();
  rep.total_seconds = std::chrono::duration<double>(t2 - t0).count();
  if (!cfg.out_dir.empty()) write_report_files(rep, cfg.out_dir);
  return rep;
}

// ---------------------------------------------------------------------------------------------

struct ConvergenceRow {
  std::size_t T = 0, N = 0;
  std::uint64_t d1 = 0, d2 = 0;  // d2 unused for degree rows
  double oracle = 0.0;           // dp value / T
  double theory = 0.0;
  double abs_diff = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> degree_rows;
  std::vector<ConvergenceRow> edge_rows;
  /// For each degree (or pair), whether abs_diff is nonincreasing in T within `slack`.
  bool nonincreasing(double slack = 1e-12) const {
    auto check = [&](const std::vector<ConvergenceRow>& rows) {
      std::map<std::pair<std::uint64_t, std::uint64_t>, double> last;
      for (const auto& r : rows) {
        auto key = std::make_pair(r.d1, r.d2);
        auto it = last.find(key);
        if (it != last.end() && r.abs_diff > it->second + slack) return false;
        last[key] = r.abs_diff;
      }
      return true;
    };
    return check(degree_rows) && check(edge_rows);
  }
};

/// dp/T against f_in(d, N/T) and dp_EX/T against g(N/T, d1, d2) at N = round((α+γ)T).
inline ConvergenceTable compare_theory_vs_oracle(const ModelParams& params, const SeedGraph& g0,
                                                 std::vector<std::size_t> T_grid, const std::vector<std::uint64_t>& d_grid,
                                                 const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pair_grid = {},
                                                 const QuadratureSpec& q = {}) {
  auto p = validate_params(params, g0).params;
  require(!T_grid.empty(), ErrorCode::invalid_argument, "T grid is empty");
  std::sort(T_grid.begin(), T_grid.end());
  T_grid.erase(std::unique(T_grid.begin(), T_grid.end()), T_grid.end());
  require(T_grid.front() >= 1, ErrorCode::invalid_argument, "T grid must start at 1 or later");
  std::size_t T_max = T_grid.back();
  DPOptions opt{T_grid};
  ConvergenceTable out;
  auto N_of = [&](std::size_t T) {
    return static_cast<std::size_t>(std::llround((p.alpha + p.gamma) * static_cast<double>(T)));
  };
  if (!d_grid.empty()) {
    std::uint64_t dmax = *std::max_element(d_grid.begin(), d_grid.end());
    auto E = dp_E_in(p, g0, T_max, dmax, opt);
    for (auto T : T_grid) {
      std::size_t N = N_of(T);
      double x = static_cast<double>(N) / static_cast<double>(T);
      auto f = f_in_sequence(dmax, x, p);
      for (auto d : d_grid) {
        double o = E.at(T, N, d) / static_cast<double>(T);
        out.degree_rows.push_back({T, N, d, 0, o, f[d], std::abs(o - f[d])});
      }
    }
  }
  if (!pair_grid.empty()) {
    require(params_all_positive(p), ErrorCode::invalid_argument, "edge comparison needs all parameters positive");
    std::uint64_t m1 = 0, m2 = 0;
    for (const auto& [a, b] : pair_grid) {
      m1 = std::max(m1, a);
      m2 = std::max(m2, b);
    }
    auto X = dp_EX(p, g0, T_max, m1, m2, opt);
    for (auto T : T_grid) {
      std::size_t N = N_of(T);
      double x = static_cast<double>(N) / static_cast<double>(T);
      for (const auto& [d1, d2] : pair_grid) {
        double o = X.at(T, N, d1, d2) / static_cast<double>(T);
        double g = g_edge_density(x, d1, d2, p, q);
        out.edge_rows.push_back({T, N, d1, d2, o, g, std::abs(o - g)});
      }
    }
  }
  return out;
}

}  // namespace dpa
