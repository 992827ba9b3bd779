// Exact references: dynamic programs over the conditional-expectation recurrences,
// binomial mixing over the vertex count, and brute-force enumeration of short histories.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "core.hpp"
#include "stats.hpp"

namespace dpa {

enum class DPKind { E_in, E_out, D2, EX };

/// Conditional expectations given N process-created vertices after T steps.
/// Values are kept only for the snapshot times; each snapshot is a dense (N, degree index) slice.
class DPTable {
 public:
  DPTable() = default;
  DPTable(DPKind kind, std::size_t T_max, std::size_t dim1, std::size_t dim2, double A_in, double A_out)
      : kind_(kind), T_max_(T_max), dim1_(dim1), dim2_(dim2), A_in_(A_in), A_out_(A_out) {}

  DPKind kind() const { return kind_; }
  std::size_t T_max() const { return T_max_; }
  /// Degree extent: E-kind tables use dim1 = d_max + 1 and dim2 = 1.
  std::size_t dim1() const { return dim1_; }
  std::size_t dim2() const { return dim2_; }
  double A_in() const { return A_in_; }
  double A_out() const { return A_out_; }

  bool has(std::size_t T) const { return layers_.count(T) != 0; }
  std::vector<std::size_t> snapshot_times() const {
    std::vector<std::size_t> out;
    for (const auto& [T, _] : layers_) out.push_back(T);
    return out;
  }

  double at(std::size_t T, std::size_t N, std::size_t k1, std::size_t k2 = 0) const {
    auto it = layers_.find(T);
    require(it != layers_.end(), ErrorCode::invalid_argument, "T=" + std::to_string(T) + " not kept in table");
    require(N <= T && k1 < dim1_ && k2 < dim2_, ErrorCode::invalid_argument, "table index out of range");
    return it->second[(N * dim1_ + k1) * dim2_ + k2];
  }

  void store(std::size_t T, std::vector<double> layer) { layers_[T] = std::move(layer); }

 private:
  DPKind kind_ = DPKind::E_in;
  std::size_t T_max_ = 0;
  std::size_t dim1_ = 0, dim2_ = 0;
  double A_in_ = 0.0, A_out_ = 0.0;
  std::map<std::size_t, std::vector<double>> layers_;
};

struct DPOptions {
  /// Times to keep. Empty keeps every T when the table is small, otherwise only T_max.
  std::vector<std::size_t> snapshots;
};

inline constexpr std::size_t kMaxT_E = 2000;
inline constexpr std::size_t kMaxT_D2 = 500;

namespace detail {

inline std::vector<std::size_t> resolve_snapshots(const DPOptions& opt, std::size_t T_max, std::size_t per_layer) {
  if (!opt.snapshots.empty()) {
    auto s = opt.snapshots;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    require(s.back() <= T_max, ErrorCode::invalid_argument, "snapshot beyond T_max");
    return s;
  }
  double total = 0.5 * static_cast<double>(T_max + 1) * static_cast<double>(T_max + 2) * static_cast<double>(per_layer);
  std::vector<std::size_t> all;
  if (total <= 2e7) {
    for (std::size_t T = 0; T <= T_max; ++T) all.push_back(T);
  } else {
    all.push_back(T_max);
  }
  return all;
}

/// Seed histogram truncated or padded to d_max + 1 entries.
inline std::vector<double> seed_histogram(const SeedGraph& g0, Side side, std::size_t d_max) {
  auto g = DirectedMultigraph::from_seed(g0);
  auto degs = side == Side::in ? g.in_degrees() : g.out_degrees();
  std::vector<double> h(d_max + 1, 0.0);
  for (auto d : degs)
    if (d <= d_max) h[d] += 1.0;
  return h;
}

/// One layer of the in-degree recurrence: E_d(T, N) for N in [0, T], d in [0, d_max].
class EStepper {
 public:
  EStepper(const ModelParams& p, const SeedGraph& g0, std::size_t d_max)
      : d_max_(d_max), delta_(p.delta_in), a_(p.alpha / (p.alpha + p.gamma)) {
    A_ = static_cast<double>(g0.t0()) + p.delta_in * static_cast<double>(g0.n0);
    cur_ = seed_histogram(g0, Side::in, d_max);
  }

  std::size_t T() const { return T_; }
  double A() const { return A_; }
  const std::vector<double>& layer() const { return cur_; }
  double at(std::size_t N, std::ptrdiff_t d) const {
    if (d < 0 || static_cast<std::size_t>(d) > d_max_) return 0.0;
    return cur_[N * (d_max_ + 1) + static_cast<std::size_t>(d)];
  }

  /// Weight of a chosen target's degree moving from d: (d+δ)/S, with S the total sampling weight.
  double denom_new(std::size_t N) const { return static_cast<double>(T_) + delta_ * (static_cast<double>(N) - 1.0) + A_; }
  double denom_same(std::size_t N) const { return static_cast<double>(T_) + delta_ * static_cast<double>(N) + A_; }

  void advance() {
    std::size_t T = T_;
    std::size_t w = d_max_ + 1;
    std::vector<double> next((T + 2) * w, 0.0);
    double inv = 1.0 / static_cast<double>(T + 1);
    for (std::size_t N = 0; N <= T + 1; ++N) {
      double* out = &next[N * w];
      if (N > 0) {
        double wa = a_ * static_cast<double>(N) * inv;
        double wg = (1.0 - a_) * static_cast<double>(N) * inv;
        double S = denom_new(N);
        for (std::size_t d = 0; d <= d_max_; ++d) {
          double dd = static_cast<double>(d);
          double stay = at(N - 1, static_cast<std::ptrdiff_t>(d));
          double below = at(N - 1, static_cast<std::ptrdiff_t>(d) - 1);
          double moved = S > 0.0 ? stay * (1.0 - (dd + delta_) / S) + below * (dd - 1.0 + delta_) / S : stay;
          if (d == 0) moved += 1.0;
          out[d] += wa * moved;
          out[d] += wg * (stay + (d == 1 ? 1.0 : 0.0));
        }
      }
      if (N < T + 1) {
        double wb = static_cast<double>(T + 1 - N) * inv;
        double S = denom_same(N);
        for (std::size_t d = 0; d <= d_max_; ++d) {
          double dd = static_cast<double>(d);
          double stay = at(N, static_cast<std::ptrdiff_t>(d));
          double below = at(N, static_cast<std::ptrdiff_t>(d) - 1);
          double moved = S > 0.0 ? stay * (1.0 - (dd + delta_) / S) + below * (dd - 1.0 + delta_) / S : stay;
          out[d] += wb * moved;
        }
      }
    }
    cur_ = std::move(next);
    ++T_;
  }

 private:
  std::size_t d_max_;
  double delta_;
  double a_;
  double A_ = 0.0;
  std::size_t T_ = 0;
  std::vector<double> cur_;
};

inline void check_dp_inputs(const ModelParams& p, const SeedGraph& g0, std::size_t T_max, std::size_t limit) {
  validate_params(p, g0);
  require(T_max <= limit, ErrorCode::resource_guard,
          "T_max " + std::to_string(T_max) + " exceeds the guard " + std::to_string(limit));
}

}  // namespace detail

/// E_d(T, N): expected number of vertices with in-degree d given N process-created vertices.
inline DPTable dp_E_in(const ModelParams& params, const SeedGraph& g0, std::size_t T_max, std::size_t d_max,
                       const DPOptions& opt = {}) {
  detail::check_dp_inputs(params, g0, T_max, kMaxT_E);
  auto p = validate_params(params, g0).params;
  detail::EStepper step(p, g0, d_max);
  double A_out = static_cast<double>(g0.t0()) + p.delta_out * static_cast<double>(g0.n0);
  DPTable table(DPKind::E_in, T_max, d_max + 1, 1, step.A(), A_out);
  auto keep = detail::resolve_snapshots(opt, T_max, d_max + 1);
  std::size_t next_keep = 0;
  for (std::size_t T = 0;; ++T) {
    if (next_keep < keep.size() && keep[next_keep] == T) {
      table.store(T, step.layer());
      ++next_keep;
    }
    if (T == T_max) break;
    step.advance();
  }
  return table;
}

/// Out-degree table: the in-degree recurrence for the mirrored model on the transposed seed.
inline DPTable dp_E_out(const ModelParams& params, const SeedGraph& g0, std::size_t T_max, std::size_t d_max,
                        const DPOptions& opt = {}) {
  auto t = dp_E_in(params.mirrored(), g0.transposed(), T_max, d_max, opt);
  DPTable out(DPKind::E_out, T_max, d_max + 1, 1, t.A_out(), t.A_in());
  for (auto T : t.snapshot_times()) {
    std::vector<double> layer((T + 1) * (d_max + 1));
    for (std::size_t N = 0; N <= T; ++N)
      for (std::size_t d = 0; d <= d_max; ++d) layer[N * (d_max + 1) + d] = t.at(T, N, d);
    out.store(T, std::move(layer));
  }
  return out;
}

enum class D2Source {
  exact,      // new vertex paired with j whose degree may move in the same step
  published,  // the same source term with j's degree frozen at its pre-step value
};

/// D_{d1,d2}(T, N) = expected number of ordered pairs i ≠ j with in-degrees d1 and d2,
/// for every 0 ≤ d1 ≤ d1_max, 0 ≤ d2 ≤ d2_max.
inline DPTable dp_D2(const ModelParams& params, const SeedGraph& g0, std::size_t T_max, std::size_t d1_max,
                     std::size_t d2_max, const DPOptions& opt = {}, D2Source source = D2Source::exact) {
  detail::check_dp_inputs(params, g0, T_max, kMaxT_D2);
  auto p = validate_params(params, g0).params;
  std::size_t dm = std::max(d1_max, d2_max);
  detail::EStepper E(p, g0, dm);
  double A_out = static_cast<double>(g0.t0()) + p.delta_out * static_cast<double>(g0.n0);
  std::size_t w1 = d1_max + 1, w2 = d2_max + 1;
  DPTable table(DPKind::D2, T_max, w1, w2, E.A(), A_out);
  auto h = detail::seed_histogram(g0, Side::in, dm);
  std::vector<double> cur(w1 * w2);
  for (std::size_t i = 0; i < w1; ++i)
    for (std::size_t j = 0; j < w2; ++j) cur[i * w2 + j] = h[i] * h[j] - (i == j ? h[i] : 0.0);

  double delta = p.delta_in;
  double a = p.alpha / (p.alpha + p.gamma);
  auto keep = detail::resolve_snapshots(opt, T_max, w1 * w2);
  std::size_t next_keep = 0;
  for (std::size_t T = 0;; ++T) {
    if (next_keep < keep.size() && keep[next_keep] == T) {
      table.store(T, cur);
      ++next_keep;
    }
    if (T == T_max) break;
    auto D = [&](std::size_t N, std::ptrdiff_t i, std::ptrdiff_t j) {
      if (i < 0 || j < 0) return 0.0;
      return cur[(N * w1 + static_cast<std::size_t>(i)) * w2 + static_cast<std::size_t>(j)];
    };
    std::vector<double> next((T + 2) * w1 * w2, 0.0);
    double inv = 1.0 / static_cast<double>(T + 1);
    for (std::size_t N = 0; N <= T + 1; ++N) {
      double Sa = N > 0 ? E.denom_new(N) : 0.0;
      double Sb = E.denom_same(N);
      // expected count of old vertices ending the step at degree d when the new vertex points elsewhere
      auto e_after = [&](std::ptrdiff_t d) {
        double stay = E.at(N - 1, d);
        if (source == D2Source::published || Sa <= 0.0) return stay;
        double dd = static_cast<double>(d);
        return stay * (1.0 - (dd + delta) / Sa) + E.at(N - 1, d - 1) * (dd - 1.0 + delta) / Sa;
      };
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(w1); ++i) {
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(w2); ++j) {
          double di = static_cast<double>(i), dj = static_cast<double>(j);
          double v = 0.0;
          if (N > 0) {
            double wa = a * static_cast<double>(N) * inv;
            double wg = (1.0 - a) * static_cast<double>(N) * inv;
            double moved = D(N - 1, i, j);
            if (Sa > 0.0) {
              moved = D(N - 1, i, j) * (1.0 - (di + dj + 2.0 * delta) / Sa) +
                      D(N - 1, i - 1, j) * (di - 1.0 + delta) / Sa + D(N - 1, i, j - 1) * (dj - 1.0 + delta) / Sa;
            }
            double src_a = (i == 0 ? e_after(j) : 0.0) + (j == 0 ? e_after(i) : 0.0);
            double src_g = (i == 1 ? E.at(N - 1, j) : 0.0) + (j == 1 ? E.at(N - 1, i) : 0.0);
            v += wa * (moved + src_a) + wg * (D(N - 1, i, j) + src_g);
          }
          if (N < T + 1) {
            double wb = static_cast<double>(T + 1 - N) * inv;
            double moved = D(N, i, j);
            if (Sb > 0.0) {
              moved = D(N, i, j) * (1.0 - (di + dj + 2.0 * delta) / Sb) + D(N, i - 1, j) * (di - 1.0 + delta) / Sb +
                      D(N, i, j - 1) * (dj - 1.0 + delta) / Sb;
            }
            v += wb * moved;
          }
          next[(N * w1 + static_cast<std::size_t>(i)) * w2 + static_cast<std::size_t>(j)] = v;
        }
      }
    }
    cur = std::move(next);
    E.advance();
  }
  return table;
}

/// E_X(T, N, d1, d2) by the recurrence that drops O(1/T) terms, so it tracks g·T but is not an
/// exact expectation. Indices run over 0 ≤ d1 ≤ d1_max, 0 ≤ d2 ≤ d2_max.
inline DPTable dp_EX(const ModelParams& params, const SeedGraph& g0, std::size_t T_max, std::size_t d1_max,
                     std::size_t d2_max, const DPOptions& opt = {}) {
  detail::check_dp_inputs(params, g0, T_max, kMaxT_E);
  auto p = validate_params(params, g0).params;
  detail::EStepper Ein(p, g0, d2_max);
  detail::EStepper Eout(p.mirrored(), g0.transposed(), d1_max);
  std::size_t w1 = d1_max + 1, w2 = d2_max + 1;
  DPTable table(DPKind::EX, T_max, w1, w2, Ein.A(), Eout.A());
  auto seed_x = edge_joint_counts(DirectedMultigraph::from_seed(g0));
  std::vector<double> cur(w1 * w2, 0.0);
  for (const auto& [key, c] : seed_x.counts)
    if (key.first < w1 && key.second < w2) cur[key.first * w2 + key.second] = static_cast<double>(c);

  double di = p.delta_in, dout = p.delta_out;
  double a = p.alpha / (p.alpha + p.gamma);
  auto keep = detail::resolve_snapshots(opt, T_max, w1 * w2);
  std::size_t next_keep = 0;
  for (std::size_t T = 0;; ++T) {
    if (next_keep < keep.size() && keep[next_keep] == T) {
      table.store(T, cur);
      ++next_keep;
    }
    if (T == T_max) break;
    auto X = [&](std::size_t N, std::ptrdiff_t i, std::ptrdiff_t j) {
      if (i < 0 || j < 0) return 0.0;
      return cur[(N * w1 + static_cast<std::size_t>(i)) * w2 + static_cast<std::size_t>(j)];
    };
    std::vector<double> next((T + 2) * w1 * w2, 0.0);
    double inv = 1.0 / static_cast<double>(T + 1);
    for (std::size_t N = 0; N <= T + 1; ++N) {
      double Sin_a = N > 0 ? Ein.denom_new(N) : 0.0, Sout_a = N > 0 ? Eout.denom_new(N) : 0.0;
      double Sin_b = Ein.denom_same(N), Sout_b = Eout.denom_same(N);
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(w1); ++i) {
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(w2); ++j) {
          double d1 = static_cast<double>(i), d2 = static_cast<double>(j);
          double v = 0.0;
          if (N > 0 && i >= 1 && j >= 1) {
            double wa = a * static_cast<double>(N) * inv;
            double pin = Sin_a > 0.0 ? (d2 - 1.0 + di) / Sin_a : 0.0;
            double stay = Sin_a > 0.0 ? 1.0 - (d2 + di) / Sin_a : 1.0;
            v += wa * (X(N - 1, i, j) * stay + pin * ((i == 1 ? Ein.at(N - 1, j - 1) : 0.0) + X(N - 1, i, j - 1)));
            double wg = (1.0 - a) * static_cast<double>(N) * inv;
            double pout = Sout_a > 0.0 ? (d1 - 1.0 + dout) / Sout_a : 0.0;
            double stay_o = Sout_a > 0.0 ? 1.0 - (d1 + dout) / Sout_a : 1.0;
            v += wg * (X(N - 1, i, j) * stay_o + pout * ((j == 1 ? Eout.at(N - 1, i - 1) : 0.0) + X(N - 1, i - 1, j)));
          }
          if (N < T + 1 && i >= 1 && j >= 1) {
            double wb = static_cast<double>(T + 1 - N) * inv;
            double qin = Sin_b > 0.0 ? 1.0 / Sin_b : 0.0, qout = Sout_b > 0.0 ? 1.0 / Sout_b : 0.0;
            double u = X(N, i, j) * (1.0 - (d2 + di) * qin - (d1 + dout) * qout) +
                       X(N, i, j - 1) * (d2 - 1.0 + di) * qin + X(N, i - 1, j) * (d1 - 1.0 + dout) * qout +
                       Eout.at(N, i - 1) * Ein.at(N, j - 1) * (d1 - 1.0 + dout) * qout * (d2 - 1.0 + di) * qin;
            v += wb * u;
          }
          next[(N * w1 + static_cast<std::size_t>(i)) * w2 + static_cast<std::size_t>(j)] = v;
        }
      }
    }
    cur = std::move(next);
    Ein.advance();
    Eout.advance();
  }
  return table;
}

/// log of Binom(T, q)(N).
inline double log_binomial_weight(std::size_t T, std::size_t N, double q) {
  double lc = std::lgamma(T + 1.0) - std::lgamma(N + 1.0) - std::lgamma(T - N + 1.0);
  double lq = N == 0 ? 0.0 : static_cast<double>(N) * std::log(q);
  double lr = N == T ? 0.0 : static_cast<double>(T - N) * std::log1p(-q);
  return lc + lq + lr;
}

/// Unconditional expectation at time T: Σ_N Binom(T, α+γ)(N) · table[T, N, k1, k2].
inline double mix_binomial(const DPTable& table, const ModelParams& p, std::size_t T, std::size_t k1,
                           std::size_t k2 = 0) {
  double q = std::min(1.0, p.alpha + p.gamma);
  if (q >= 1.0) return table.at(T, T, k1, k2);
  double sum = 0.0;
  for (std::size_t N = 0; N <= T; ++N) {
    double lw = log_binomial_weight(T, N, q);
    if (lw < -745.0) continue;
    sum += std::exp(lw) * table.at(T, N, k1, k2);
  }
  return sum;
}

/// Mixed curve for every kept T.
inline std::vector<std::pair<std::size_t, double>> mix_binomial_curve(const DPTable& table, const ModelParams& p,
                                                                      std::size_t k1, std::size_t k2 = 0) {
  std::vector<std::pair<std::size_t, double>> out;
  for (auto T : table.snapshot_times()) out.emplace_back(T, mix_binomial(table, p, T, k1, k2));
  return out;
}

// ---------------------------------------------------------------------------------------------
// Enumeration of every history of length T with labeled vertices.

struct ExactOutcome {
  std::size_t n = 0;
  std::vector<Edge> edges;  // sorted multiset; order of creation is irrelevant to every statistic
  double probability = 0.0;
};

class ExactDistribution {
 public:
  ExactDistribution(std::size_t n0, std::vector<ExactOutcome> outcomes) : n0_(n0), outcomes_(std::move(outcomes)) {}

  const std::vector<ExactOutcome>& outcomes() const { return outcomes_; }
  std::size_t n0() const { return n0_; }

  double total_probability() const {
    double s = 0.0;
    for (const auto& o : outcomes_) s += o.probability;
    return s;
  }

  /// E[f(graph)] and, when given a vertex count, E[f | N process vertices].
  double expect(const std::function<double(const DirectedMultigraph&)>& f,
                std::optional<std::size_t> N = std::nullopt) const {
    double num = 0.0, den = 0.0;
    for (const auto& o : outcomes_) {
      if (N && o.n != n0_ + *N) continue;
      num += o.probability * f(DirectedMultigraph::from_edges(o.n, o.edges));
      den += o.probability;
    }
    if (N) return den > 0.0 ? num / den : 0.0;
    return num;
  }

  double variance(const std::function<double(const DirectedMultigraph&)>& f) const {
    double m = expect(f);
    return expect([&](const DirectedMultigraph& g) {
      double d = f(g) - m;
      return d * d;
    });
  }

  double prob_vertices(std::size_t N) const {
    double s = 0.0;
    for (const auto& o : outcomes_)
      if (o.n == n0_ + N) s += o.probability;
    return s;
  }

  double expected_n_in(std::uint64_t d, std::optional<std::size_t> N = std::nullopt) const {
    return expect([d](const DirectedMultigraph& g) { return static_cast<double>(degree_histogram(g, Side::in).at(d)); },
                  N);
  }
  double expected_n_out(std::uint64_t d, std::optional<std::size_t> N = std::nullopt) const {
    return expect(
        [d](const DirectedMultigraph& g) { return static_cast<double>(degree_histogram(g, Side::out).at(d)); }, N);
  }
  /// E[#ordered pairs i ≠ j with in-degrees d1, d2].
  double expected_pairs_in(std::uint64_t d1, std::uint64_t d2, std::optional<std::size_t> N = std::nullopt) const {
    return expect(
        [=](const DirectedMultigraph& g) {
          auto h = degree_histogram(g, Side::in);
          double a = static_cast<double>(h.at(d1)), b = static_cast<double>(h.at(d2));
          return a * b - (d1 == d2 ? a : 0.0);
        },
        N);
  }
  double expected_x(std::uint64_t d1, std::uint64_t d2, std::optional<std::size_t> N = std::nullopt) const {
    return expect([=](const DirectedMultigraph& g) { return static_cast<double>(edge_joint_counts(g).at(d1, d2)); },
                  N);
  }

 private:
  std::size_t n0_;
  std::vector<ExactOutcome> outcomes_;
};

inline constexpr std::size_t kMaxEnumerateSteps = 6;
inline constexpr std::size_t kMaxEnumerateVertices = 7;

inline ExactDistribution enumerate_exact(const ModelParams& params, const SeedGraph& g0, std::size_t T) {
  auto cfg = validate_params(params, g0);
  require(T <= kMaxEnumerateSteps && g0.n0 + T <= kMaxEnumerateVertices, ErrorCode::resource_guard,
          "enumeration limited to T <= 6 and n0 + T <= 7");
  const auto& p = cfg.params;
  using Key = std::pair<std::size_t, std::vector<Edge>>;
  std::map<Key, double> states;
  {
    auto e = g0.edges;
    std::sort(e.begin(), e.end());
    states[{g0.n0, e}] = 1.0;
  }
  for (std::size_t step = 0; step < T; ++step) {
    std::map<Key, double> next;
    for (const auto& [key, prob] : states) {
      const auto& [n, edges] = key;
      std::vector<double> in_w(n, p.delta_in), out_w(n, p.delta_out);
      for (const auto& e : edges) {
        out_w[e.src] += 1.0;
        in_w[e.dst] += 1.0;
      }
      double t = static_cast<double>(edges.size());
      double in_total = t + p.delta_in * static_cast<double>(n);
      double out_total = t + p.delta_out * static_cast<double>(n);
      auto emit = [&](std::size_t new_n, Edge e, double w) {
        if (w <= 0.0) return;
        auto ne = edges;
        ne.insert(std::upper_bound(ne.begin(), ne.end(), e), e);
        next[{new_n, std::move(ne)}] += prob * w;
      };
      auto v_new = static_cast<vertex_t>(n);
      for (std::size_t w = 0; w < n; ++w) {
        double pw = in_w[w] / in_total;
        emit(n + 1, {v_new, static_cast<vertex_t>(w)}, p.alpha * pw);
        emit(n + 1, {static_cast<vertex_t>(w), v_new}, p.gamma * out_w[w] / out_total);
        for (std::size_t v = 0; v < n; ++v) {
          emit(n, {static_cast<vertex_t>(v), static_cast<vertex_t>(w)}, p.beta * out_w[v] / out_total * pw);
        }
      }
    }
    states = std::move(next);
  }
  std::vector<ExactOutcome> out;
  out.reserve(states.size());
  for (auto& [key, prob] : states) out.push_back({key.first, key.second, prob});
  return ExactDistribution(g0.n0, std::move(out));
}

}  // namespace dpa
