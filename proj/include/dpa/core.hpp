// Model parameters, seed graphs, the directed multigraph and its file formats.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dpa {

using vertex_t = std::uint32_t;

enum class ErrorCode {
  probabilities_not_normalized,
  probability_out_of_range,
  negative_delta,
  no_vertex_growth,
  empty_seed,
  missing_seed_edge,
  endpoint_out_of_range,
  malformed_row,
  non_integer_index,
  index_gap,
  io_failure,
  invalid_argument,
  degenerate_case,
  quadrature_not_converged,
  resource_guard,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::probabilities_not_normalized: return "probabilities_not_normalized";
    case ErrorCode::probability_out_of_range: return "probability_out_of_range";
    case ErrorCode::negative_delta: return "negative_delta";
    case ErrorCode::no_vertex_growth: return "no_vertex_growth";
    case ErrorCode::empty_seed: return "empty_seed";
    case ErrorCode::missing_seed_edge: return "missing_seed_edge";
    case ErrorCode::endpoint_out_of_range: return "endpoint_out_of_range";
    case ErrorCode::malformed_row: return "malformed_row";
    case ErrorCode::non_integer_index: return "non_integer_index";
    case ErrorCode::index_gap: return "index_gap";
    case ErrorCode::io_failure: return "io_failure";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::degenerate_case: return "degenerate_case";
    case ErrorCode::quadrature_not_converged: return "quadrature_not_converged";
    case ErrorCode::resource_guard: return "resource_guard";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

inline constexpr double kProbabilityTolerance = 1e-12;

struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta_in = 0.0;
  double delta_out = 0.0;

  double vertex_rate() const { return alpha + gamma; }

  /// The out-degree process is the in-degree process of this model.
  ModelParams mirrored() const { return {gamma, beta, alpha, delta_out, delta_in}; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"alpha", p.alpha},
                     {"beta", p.beta},
                     {"gamma", p.gamma},
                     {"delta_in", p.delta_in},
                     {"delta_out", p.delta_out}};
}

inline void from_json(const nlohmann::json& j, ModelParams& p) {
  j.at("alpha").get_to(p.alpha);
  j.at("beta").get_to(p.beta);
  j.at("gamma").get_to(p.gamma);
  j.at("delta_in").get_to(p.delta_in);
  j.at("delta_out").get_to(p.delta_out);
}

struct Edge {
  vertex_t src = 0;
  vertex_t dst = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Initial graph G0. Seed vertices occupy indices 0..n0-1.
struct SeedGraph {
  std::size_t n0 = 1;
  std::vector<Edge> edges;

  std::size_t t0() const { return edges.size(); }

  SeedGraph transposed() const {
    SeedGraph out{n0, edges};
    for (auto& e : out.edges) std::swap(e.src, e.dst);
    return out;
  }

  friend bool operator==(const SeedGraph&, const SeedGraph&) = default;
};

/// One vertex and no edges when both shifts are positive, otherwise one vertex with a loop.
inline SeedGraph default_seed(const ModelParams& p) {
  if (p.delta_in > 0.0 && p.delta_out > 0.0) return SeedGraph{1, {}};
  return SeedGraph{1, {Edge{0, 0}}};
}

struct ValidatedConfig {
  ModelParams params;
  SeedGraph seed;
};

/// Checks the model constraints. On success β is rewritten as 1-α-γ so the three sum exactly.
inline ValidatedConfig validate_params(const ModelParams& p, const SeedGraph& g0) {
  for (double prob : {p.alpha, p.beta, p.gamma}) {
    require(std::isfinite(prob) && prob >= 0.0 && prob <= 1.0, ErrorCode::probability_out_of_range,
            "alpha, beta, gamma must lie in [0,1]");
  }
  require(std::abs(p.alpha + p.beta + p.gamma - 1.0) <= kProbabilityTolerance,
          ErrorCode::probabilities_not_normalized, "alpha + beta + gamma must equal 1");
  require(std::isfinite(p.delta_in) && std::isfinite(p.delta_out) && p.delta_in >= 0.0 &&
              p.delta_out >= 0.0,
          ErrorCode::negative_delta, "delta_in and delta_out must be nonnegative");
  require(p.alpha + p.gamma > 0.0, ErrorCode::no_vertex_growth,
          "alpha + gamma must be positive so that the vertex count grows");
  require(g0.n0 >= 1, ErrorCode::empty_seed, "seed graph needs at least one vertex");
  require(!((p.delta_in == 0.0 || p.delta_out == 0.0) && g0.edges.empty()),
          ErrorCode::missing_seed_edge, "seed graph needs an edge when a shift is zero");
  for (const auto& e : g0.edges) {
    require(e.src < g0.n0 && e.dst < g0.n0, ErrorCode::endpoint_out_of_range,
            "seed edge endpoint outside [0, n0)");
  }
  ValidatedConfig out{p, g0};
  out.params.beta = 1.0 - p.alpha - p.gamma;
  if (out.params.beta < 0.0) out.params.beta = 0.0;
  return out;
}

inline std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> recompute_degrees(
    std::size_t n, std::span<const vertex_t> src, std::span<const vertex_t> dst) {
  std::vector<std::uint32_t> in_deg(n, 0), out_deg(n, 0);
  for (std::size_t k = 0; k < src.size(); ++k) {
    ++out_deg[src[k]];
    ++in_deg[dst[k]];
  }
  return {std::move(in_deg), std::move(out_deg)};
}

/// Creation-ordered edge list with maintained degree arrays. Loops count toward both degrees.
/// The src/dst columns double as the endpoint arrays used for preferential sampling.
class DirectedMultigraph {
 public:
  DirectedMultigraph() = default;
  explicit DirectedMultigraph(std::size_t n) : in_deg_(n, 0), out_deg_(n, 0) {}

  static DirectedMultigraph from_seed(const SeedGraph& g0) {
    DirectedMultigraph g(g0.n0);
    for (const auto& e : g0.edges) g.add_edge(e.src, e.dst);
    return g;
  }

  static DirectedMultigraph from_edges(std::size_t n, std::span<const Edge> edges) {
    DirectedMultigraph g(n);
    g.reserve(edges.size(), n);
    for (const auto& e : edges) {
      require(e.src < n && e.dst < n, ErrorCode::endpoint_out_of_range, "edge endpoint >= n");
      g.add_edge(e.src, e.dst);
    }
    return g;
  }

  void reserve(std::size_t edges, std::size_t vertices) {
    src_.reserve(edges);
    dst_.reserve(edges);
    in_deg_.reserve(vertices);
    out_deg_.reserve(vertices);
  }

  vertex_t add_vertex() {
    in_deg_.push_back(0);
    out_deg_.push_back(0);
    return static_cast<vertex_t>(in_deg_.size() - 1);
  }

  void add_edge(vertex_t u, vertex_t v) {
    src_.push_back(u);
    dst_.push_back(v);
    ++out_deg_[u];
    ++in_deg_[v];
  }

  std::size_t vertex_count() const { return in_deg_.size(); }
  std::size_t edge_count() const { return src_.size(); }

  std::span<const vertex_t> sources() const { return src_; }
  std::span<const vertex_t> targets() const { return dst_; }
  std::span<const std::uint32_t> in_degrees() const { return in_deg_; }
  std::span<const std::uint32_t> out_degrees() const { return out_deg_; }
  Edge edge(std::size_t k) const { return {src_[k], dst_[k]}; }

  std::vector<Edge> edges() const {
    std::vector<Edge> out(src_.size());
    for (std::size_t k = 0; k < src_.size(); ++k) out[k] = {src_[k], dst_[k]};
    return out;
  }

  /// Full O(t) check that the maintained degrees match the edge list.
  bool degrees_consistent() const {
    auto [in_deg, out_deg] = recompute_degrees(vertex_count(), src_, dst_);
    return in_deg == in_deg_ && out_deg == out_deg_;
  }

  std::size_t memory_bytes() const {
    return (src_.capacity() + dst_.capacity()) * sizeof(vertex_t) +
           (in_deg_.capacity() + out_deg_.capacity()) * sizeof(std::uint32_t);
  }

  friend bool operator==(const DirectedMultigraph&, const DirectedMultigraph&) = default;

 private:
  std::vector<vertex_t> src_;
  std::vector<vertex_t> dst_;
  std::vector<std::uint32_t> in_deg_;
  std::vector<std::uint32_t> out_deg_;
};

namespace detail {

inline std::uint64_t parse_index(std::string_view field, std::size_t line_no) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  field = trim(field);
  require(!field.empty(), ErrorCode::malformed_row, "empty field on line " + std::to_string(line_no));
  bool digits = std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; });
  if (!digits) {
    // numbers such as 1.5 or -2 are non-integer indices; anything else is a broken row
    std::string s(field);
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    bool numeric = end == s.c_str() + s.size();
    throw Error(numeric ? ErrorCode::non_integer_index : ErrorCode::malformed_row,
                "bad index '" + s + "' on line " + std::to_string(line_no));
  }
  std::uint64_t value = 0;
  for (char c : field) {
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
    require(value <= 0xFFFFFFFEull, ErrorCode::malformed_row,
            "index too large on line " + std::to_string(line_no));
  }
  return value;
}

}  // namespace detail

/// Reads "src,dst" CSV. Vertices must be exactly 0..n-1 unless `vertex_count` names a larger n.
inline DirectedMultigraph read_graph_csv(std::istream& in,
                                         std::optional<std::size_t> vertex_count = std::nullopt) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::malformed_row, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "src,dst", ErrorCode::malformed_row, "header must be 'src,dst'");
  std::vector<Edge> edges;
  std::size_t line_no = 1;
  std::uint64_t max_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto comma = line.find(',');
    require(comma != std::string::npos && line.find(',', comma + 1) == std::string::npos,
            ErrorCode::malformed_row, "expected two fields on line " + std::to_string(line_no));
    std::string_view view(line);
    auto u = detail::parse_index(view.substr(0, comma), line_no);
    auto v = detail::parse_index(view.substr(comma + 1), line_no);
    max_index = std::max({max_index, u, v});
    edges.push_back({static_cast<vertex_t>(u), static_cast<vertex_t>(v)});
  }
  std::size_t n = edges.empty() ? 0 : static_cast<std::size_t>(max_index) + 1;
  if (vertex_count) {
    require(*vertex_count >= n, ErrorCode::endpoint_out_of_range, "vertex count below max index");
    n = *vertex_count;
  } else {
    std::vector<bool> seen(n, false);
    for (const auto& e : edges) seen[e.src] = seen[e.dst] = true;
    auto gap = std::find(seen.begin(), seen.end(), false);
    require(gap == seen.end(), ErrorCode::index_gap,
            "vertex " + std::to_string(gap - seen.begin()) + " appears in no edge");
  }
  return DirectedMultigraph::from_edges(n, edges);
}

inline void write_graph_csv(const DirectedMultigraph& g, std::ostream& out) {
  out << "src,dst\n";
  auto src = g.sources();
  auto dst = g.targets();
  std::string buf;
  buf.reserve(1 << 16);
  for (std::size_t k = 0; k < src.size(); ++k) {
    buf += std::to_string(src[k]);
    buf += ',';
    buf += std::to_string(dst[k]);
    buf += '\n';
    if (buf.size() > (1 << 16) - 32) {
      out << buf;
      buf.clear();
    }
  }
  out << buf;
}

inline DirectedMultigraph load_graph(const std::string& path,
                                     std::optional<std::size_t> vertex_count = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io_failure, "cannot open " + path);
  return read_graph_csv(in, vertex_count);
}

inline void save_graph(const DirectedMultigraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::io_failure, "cannot write " + path);
  write_graph_csv(g, out);
  require(out.good(), ErrorCode::io_failure, "write failed for " + path);
}

inline void to_json(nlohmann::json& j, const SeedGraph& g) {
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back({e.src, e.dst});
  j = nlohmann::json{{"n0", g.n0}, {"edges", edges}};
}

inline void from_json(const nlohmann::json& j, SeedGraph& g) {
  j.at("n0").get_to(g.n0);
  g.edges.clear();
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && e.size() == 2, ErrorCode::malformed_row, "seed edge must be [src,dst]");
      g.edges.push_back({e[0].get<vertex_t>(), e[1].get<vertex_t>()});
    }
  }
}

}  // namespace dpa
