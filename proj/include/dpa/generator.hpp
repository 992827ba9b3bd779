// The growth process: one edge per step, preferential sampling by shifted degree.
#pragma once

#include <cassert>
#include <cstdint>
#include <utility>

#include "core.hpp"
#include "rng.hpp"

namespace dpa {

enum class StepKind { new_source, existing_pair, new_target };

/// Probability that a preferential draw takes the edge-endpoint branch, t/(t+δn).
inline double endpoint_branch_probability(std::size_t t, std::size_t n, double delta) {
  double total = static_cast<double>(t) + delta * static_cast<double>(n);
  require(total > 0.0, ErrorCode::invalid_argument, "sampling weight t + delta*n must be positive");
  return static_cast<double>(t) / total;
}

class GenState {
 public:
  GenState(const ValidatedConfig& cfg, std::uint64_t rng_seed, std::uint64_t stream = 0)
      : params_(cfg.params), graph_(DirectedMultigraph::from_seed(cfg.seed)), rng_(rng_seed, stream) {}

  GenState(const ModelParams& params, DirectedMultigraph graph, Rng rng)
      : params_(params), graph_(std::move(graph)), rng_(rng) {}

  const DirectedMultigraph& graph() const { return graph_; }
  DirectedMultigraph release() && { return std::move(graph_); }
  const ModelParams& params() const { return params_; }
  Rng& rng() { return rng_; }

  void reserve(std::size_t edges) {
    std::size_t extra = edges > graph_.edge_count() ? edges - graph_.edge_count() : 0;
    graph_.reserve(edges, graph_.vertex_count() + extra);
  }

  /// Vertex w with probability (in_deg[w]+δ_in)/(t+δ_in·n).
  vertex_t sample_in_target() { return sample(graph_.targets(), params_.delta_in); }

  /// Vertex v with probability (out_deg[v]+δ_out)/(t+δ_out·n).
  vertex_t sample_out_source() { return sample(graph_.sources(), params_.delta_out); }

  StepKind step() {
    double u = rng_.uniform();
#ifndef NDEBUG
    std::size_t t_before = graph_.edge_count();
    std::size_t n_before = graph_.vertex_count();
#endif
    StepKind kind;
    if (u < params_.alpha) {
      vertex_t w = sample_in_target();
      vertex_t v = graph_.add_vertex();
      graph_.add_edge(v, w);
      kind = StepKind::new_source;
    } else if (u < params_.alpha + params_.beta) {
      vertex_t v = sample_out_source();
      vertex_t w = sample_in_target();
      graph_.add_edge(v, w);
      kind = StepKind::existing_pair;
    } else {
      vertex_t v = sample_out_source();
      vertex_t w = graph_.add_vertex();
      graph_.add_edge(v, w);
      kind = StepKind::new_target;
    }
#ifndef NDEBUG
    assert(graph_.edge_count() == t_before + 1);
    assert(graph_.vertex_count() == n_before + (kind == StepKind::existing_pair ? 0 : 1));
    Edge e = graph_.edge(t_before);
    assert(graph_.out_degrees()[e.src] >= 1 && graph_.in_degrees()[e.dst] >= 1);
#endif
    return kind;
  }

 private:
  vertex_t sample(std::span<const vertex_t> endpoints, double delta) {
    std::size_t t = endpoints.size();
    std::size_t n = graph_.vertex_count();
    if (n == 1) return 0;
    if (t > 0 && (delta == 0.0 || rng_.uniform() < endpoint_branch_probability(t, n, delta))) {
      return endpoints[rng_.below(t)];
    }
    require(delta > 0.0, ErrorCode::invalid_argument, "sampling from an edgeless graph with zero shift");
    return static_cast<vertex_t>(rng_.below(n));
  }

  ModelParams params_;
  DirectedMultigraph graph_;
  Rng rng_;
};

/// Grows the seed graph until it has exactly `target_edges` edges.
inline DirectedMultigraph generate(const ModelParams& params, const SeedGraph& seed, std::size_t target_edges,
                                   std::uint64_t rng_seed, std::uint64_t stream = 0) {
  auto cfg = validate_params(params, seed);
  require(target_edges >= seed.t0(), ErrorCode::invalid_argument, "target edge count below seed edge count");
  require(target_edges < 0xFFFFFFF0ull, ErrorCode::resource_guard, "edge count exceeds 32-bit vertex indices");
  GenState state(cfg, rng_seed, stream);
  state.reserve(target_edges);
  for (std::size_t t = seed.t0(); t < target_edges; ++t) state.step();
#ifndef NDEBUG
  assert(state.graph().degrees_consistent());
#endif
  return std::move(state).release();
}

}  // namespace dpa
