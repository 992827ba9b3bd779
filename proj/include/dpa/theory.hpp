// Limit densities, the kappa special function, the I1/I2 region integrals, the edge density g
// and the closed-form c_X asymptotics.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "core.hpp"
#include "quadrature.hpp"

namespace dpa {

enum class Regime { sum_lt_1, sum_eq_1, sum_gt_1 };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::sum_lt_1: return "sum_lt_1";
    case Regime::sum_eq_1: return "sum_eq_1";
    case Regime::sum_gt_1: return "sum_gt_1";
  }
  return "unknown";
}

inline constexpr double kRegimeTolerance = 1e-6;

struct TheoryParams {
  ModelParams model;
  double cbar_in = 0.0;
  double cbar_out = 0.0;
  std::optional<double> C_in;
  double a = 0.0;
  Regime regime = Regime::sum_eq_1;
};

inline Regime classify_regime(double cbar_sum) {
  if (std::abs(cbar_sum - 1.0) < kRegimeTolerance) return Regime::sum_eq_1;
  return cbar_sum < 1.0 ? Regime::sum_lt_1 : Regime::sum_gt_1;
}

inline TheoryParams derive_theory(const ModelParams& p) {
  TheoryParams th;
  th.model = p;
  double vr = p.alpha + p.gamma;
  require(vr > 0.0, ErrorCode::no_vertex_growth, "alpha + gamma must be positive");
  th.cbar_in = (1.0 - p.gamma) / (1.0 + p.delta_in * vr);
  th.cbar_out = (1.0 - p.alpha) / (1.0 + p.delta_out * vr);
  th.a = p.alpha / vr;
  th.regime = classify_regime(th.cbar_in + th.cbar_out);
  if (th.cbar_in > 0.0 && th.cbar_in < 1.0) {
    double c = th.cbar_in;
    th.C_in = std::exp(std::lgamma(p.delta_in + 1.0 / c) - std::lgamma(1.0 + p.delta_in)) * (1.0 - c) / (c * c);
  }
  return th;
}

/// c_in(x) = (1 - x + a x)/(1 + δ_in x); equals c̄_in at x = α+γ.
inline double c_in_at(const ModelParams& p, double x) {
  return (1.0 - p.gamma / (p.alpha + p.gamma) * x) / (1.0 + p.delta_in * x);
}

inline double c_out_at(const ModelParams& p, double x) {
  return (1.0 - p.alpha / (p.alpha + p.gamma) * x) / (1.0 + p.delta_out * x);
}

/// Limit in-degree density per edge.
inline double fbar(std::uint64_t d, const TheoryParams& th) {
  require(th.C_in.has_value(), ErrorCode::degenerate_case,
          "fbar needs 0 < cbar_in < 1 (cbar_in = " + std::to_string(th.cbar_in) + ")");
  double delta = th.model.delta_in;
  double c = th.cbar_in;
  if (d == 0) return th.model.alpha / (1.0 + delta * c);
  double dd = static_cast<double>(d);
  return *th.C_in * std::exp(std::lgamma(dd + delta) - std::lgamma(dd + delta + 1.0 + 1.0 / c));
}

/// f_0(x), ..., f_dmax(x) for in-degrees by the product form, accumulated in log space.
inline std::vector<double> f_in_sequence(std::uint64_t dmax, double x, const ModelParams& p) {
  require(x >= 0.0 && x <= 1.0, ErrorCode::invalid_argument, "x must lie in [0,1]");
  std::vector<double> f(dmax + 1, 0.0);
  double c = c_in_at(p, x);
  double delta = p.delta_in;
  double a = p.alpha / (p.alpha + p.gamma);
  f[0] = a * x / (1.0 + c * delta);
  if (dmax == 0) return f;
  if (c >= 1.0) return f;  // x = 0: nothing but seedless zeros
  double log_f = std::log1p(-c) - std::log1p(c * delta) - std::log1p(c * (delta + 1.0));
  f[1] = std::exp(log_f);
  if (c <= 0.0) return f;
  double log_c = std::log(c);
  for (std::uint64_t d = 2; d <= dmax; ++d) {
    double i = static_cast<double>(d);
    log_f += log_c + std::log(delta + i - 1.0) - std::log1p(c * (delta + i));
    f[d] = std::exp(log_f);
  }
  return f;
}

inline double f_in(std::uint64_t d, double x, const ModelParams& p) { return f_in_sequence(d, x, p)[d]; }

inline std::vector<double> f_out_sequence(std::uint64_t dmax, double x, const ModelParams& p) {
  return f_in_sequence(dmax, x, p.mirrored());
}

inline double f_out(std::uint64_t d, double x, const ModelParams& p) { return f_in(d, x, p.mirrored()); }

/// The Γ-ratio representation, valid for δ_in > 0 and c_in(x) > 0.
inline double f_in_gamma_form(std::uint64_t d, double x, const ModelParams& p) {
  double c = c_in_at(p, x);
  double delta = p.delta_in;
  require(delta > 0.0 && c > 0.0, ErrorCode::degenerate_case, "Gamma form needs delta_in > 0 and c_in(x) > 0");
  double vr = p.alpha + p.gamma;
  std::array<double, 2> pin{p.alpha / vr, p.gamma / vr};
  double dd = static_cast<double>(d);
  double tail = std::lgamma(dd + delta) - std::lgamma(dd + 1.0 + delta + 1.0 / c);
  double sum = 0.0;
  for (int i = 0; i <= 1; ++i) {
    if (d < static_cast<std::uint64_t>(i)) continue;
    sum += pin[i] * std::exp(std::lgamma(i + delta + 1.0 / c) - std::lgamma(i + delta) + tail) / c;
  }
  return x * sum;
}

// ---------------------------------------------------------------------------------------------
// kappa(c1,c2,r,x) = ∫_0^∞ τ^{c2-1} e^{-τ} γ(c1, x τ^r) dτ, integrated in s = ln τ.

namespace detail {

inline void check_kappa_args(double c1, double c2, double r, double x) {
  require(c1 > 0.0 && c2 > 0.0 && r > 0.0 && x >= 0.0 && std::isfinite(x), ErrorCode::invalid_argument,
          "kappa needs c1 > 0, c2 > 0, r > 0, x >= 0");
}

inline QuadResult kappa_impl(double c1, double c2, double r, double x, const QuadratureSpec& q, bool log_weight) {
  check_kappa_args(c1, c2, r, x);
  if (x == 0.0) return {0.0, 0.0};
  double lx = std::log(x);
  double p = c2 + r * c1;
  double lg_c1 = std::lgamma(c1);
  auto f = [=](double s) {
    double e = c2 * s - std::exp(s);
    if (e < -745.0) return 0.0;
    double ly = lx + r * s;
    if (ly > 700.0) ly = 700.0;
    double v = std::exp(e) * boost::math::tgamma_lower(c1, std::exp(ly));
    return log_weight ? s * v : v;
  };
  // below s: min of the two bounds on γ(c1, ·) integrated against τ^{c2-1}, with the |ln τ| factor if needed
  auto lower = [=](double s) {
    double s_neg = std::min(s, 0.0);
    double b1 = lg_c1 + c2 * s_neg - std::log(c2) + (log_weight ? std::log(-s_neg + 1.0 / c2) : 0.0);
    double b2 = c1 * lx - std::log(c1) + p * s_neg - std::log(p) + (log_weight ? std::log(-s_neg + 1.0 / p) : 0.0);
    return std::exp(std::min(b1, b2));
  };
  auto upper = [=](double s) {
    double tau = std::exp(std::max(s, 0.0));
    double shape = log_weight ? c2 + 1.0 : c2;
    return std::exp(lg_c1) * boost::math::tgamma(shape, tau);
  };
  double peak = std::log(c2);
  double turn = -lx / r;
  std::vector<double> core{-1.0, 0.0, 1.0, std::log(p), peak - 1.0, peak + 1.0};
  if (turn > -60.0 && turn < 8.0) core.push_back(turn);
  double lo = *std::min_element(core.begin(), core.end());
  double hi = *std::max_element(core.begin(), core.end());
  core.push_back(lo - 1.0);
  core.push_back(hi + 1.0);
  return integrate_outward(f, core, TailBounds{lower, upper}, q, 2.0, 1.5);
}

}  // namespace detail

inline QuadResult kappa(double c1, double c2, double r, double x, const QuadratureSpec& q = {}) {
  return detail::kappa_impl(c1, c2, r, x, q, false);
}

/// Partial derivative of kappa in c2: the same integral with an extra ln τ factor.
inline QuadResult kappa_dc2(double c1, double c2, double r, double x, const QuadratureSpec& q = {}) {
  return detail::kappa_impl(c1, c2, r, x, q, true);
}

/// Γ(c1+c2)·B(x/(1+x); c1, c2), the closed form of kappa at r = 1.
inline double kappa_r1_closed_form(double c1, double c2, double x) {
  return std::tgamma(c1 + c2) * boost::math::beta(c1, c2, x / (1.0 + x));
}

// ---------------------------------------------------------------------------------------------
// I1 and I2 over the region 0 ≤ v^{c1} ≤ w^{c2} ≤ 1.

enum class IntegralMethod { automatic, quadrature, recursion };

namespace detail {

inline bool is_small_integer(double v) { return v >= 0.0 && v <= 1e6 && v == std::floor(v); }

/// ∫_0^y v^{a-1}(1-v)^{b-1} dv.
inline double incomplete_beta(double a, double b, double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return boost::math::beta(a, b);
  return boost::math::beta(a, b, y);
}

/// Weight L(w) for I2 as a function of s = -ln w.
inline double i2_weight(double s, double c1, double xi5) {
  if (xi5 == 0.0) return s / c1;
  return -std::expm1(-xi5 * s / c1) / xi5;
}

inline QuadResult region_quadrature(double c1, double c2, double xi1, double xi2, double xi3, double xi4,
                                    std::optional<double> xi5, const QuadratureSpec& q) {
  double ratio = c2 / c1;
  auto f = [=](double s) {
    double v = std::exp(-xi3 * s) * incomplete_beta(xi1, xi2 + 1.0, std::exp(-ratio * s));
    if (xi4 != 0.0) v *= std::pow(-std::expm1(-s), xi4);
    if (xi5) v *= i2_weight(s, c1, *xi5);
    return v;
  };
  // integrand ≤ e^{-q s}·L(s)/ξ1 since B(y; ξ1, ξ2+1) ≤ y^{ξ1}/ξ1
  double decay = xi3 + xi1 * ratio;
  auto upper = [=](double s) {
    if (!xi5) return std::exp(-decay * s) / (decay * xi1);
    if (*xi5 >= 0.0) return std::exp(-decay * s) * (s / decay + 1.0 / (decay * decay)) / (c1 * xi1);
    double slow = decay + *xi5 / c1;
    return std::exp(-slow * s) / (slow * xi1 * (-*xi5));
  };
  std::vector<double> core{0.0};
  for (int k = -10; k <= 4; ++k) core.push_back(std::ldexp(1.0, k));
  return integrate_outward(f, core, TailBounds{{}, upper}, q, 4.0, 1.5);
}

}  // namespace detail

/// Table of I1(c1,c2,ξ1,j2,ξ3,j4) for integer 0 ≤ j2 ≤ n2, 0 ≤ j4 ≤ n4 by forward recursion.
/// Every term is positive, so the recursion is stable.
class I1Table {
 public:
  I1Table(double c1, double c2, double xi1, double xi3, std::size_t n2, std::size_t n4)
      : n4_(n4), values_((n2 + 1) * (n4 + 1)) {
    require(c1 > 0 && c2 > 0 && xi1 > 0 && xi3 > 0, ErrorCode::invalid_argument,
            "I1 needs c1, c2, xi1, xi3 > 0");
    for (std::size_t j2 = 0; j2 <= n2; ++j2) {
      double b = j2 == 0 ? 0.0 : c1 * std::exp(std::lgamma(xi1) + std::lgamma(j2 + 1.0) - std::lgamma(xi1 + j2 + 1.0));
      for (std::size_t j4 = 0; j4 <= n4; ++j4) {
        double lhs = c2 * (xi1 + j2) + c1 * (xi3 + j4);
        double rhs;
        if (j2 == 0 && j4 == 0) {
          rhs = c1 / xi1;
        } else {
          rhs = (j4 == 0 ? b : c1 * j4 * at(j2, j4 - 1)) + (j2 == 0 ? 0.0 : c2 * j2 * at(j2 - 1, j4));
        }
        values_[j2 * (n4_ + 1) + j4] = rhs / lhs;
      }
    }
  }
  double at(std::size_t j2, std::size_t j4) const { return values_[j2 * (n4_ + 1) + j4]; }

 private:
  std::size_t n4_;
  std::vector<double> values_;
};

/// Table of I2 by the analogous recursion; the source terms come from I1 with ξ3 shifted by ξ5/c1.
class I2Table {
 public:
  I2Table(double c1, double c2, double xi1, double xi3, double xi5, std::size_t n2, std::size_t n4)
      : n4_(n4), values_((n2 + 1) * (n4 + 1)) {
    require(xi3 + xi5 / c1 > 0.0, ErrorCode::invalid_argument, "I2 needs xi3 + xi5/c1 > 0");
    I1Table src(c1, c2, xi1, xi3 + xi5 / c1, n2, n4);
    for (std::size_t j2 = 0; j2 <= n2; ++j2) {
      for (std::size_t j4 = 0; j4 <= n4; ++j4) {
        double lhs = c2 * (xi1 + j2) + c1 * (xi3 + j4);
        double rhs = src.at(j2, j4);
        if (j4 > 0) rhs += c1 * j4 * at(j2, j4 - 1);
        if (j2 > 0) rhs += c2 * j2 * at(j2 - 1, j4);
        values_[j2 * (n4_ + 1) + j4] = rhs / lhs;
      }
    }
  }
  double at(std::size_t j2, std::size_t j4) const { return values_[j2 * (n4_ + 1) + j4]; }

 private:
  std::size_t n4_;
  std::vector<double> values_;
};

inline QuadResult I1(double c1, double c2, double xi1, double xi2, double xi3, double xi4, const QuadratureSpec& q = {},
                     IntegralMethod method = IntegralMethod::automatic) {
  require(c1 > 0 && c2 > 0 && xi1 > 0 && xi2 >= 0 && xi3 > 0 && xi4 >= 0, ErrorCode::invalid_argument,
          "I1 needs c1, c2, xi1, xi3 > 0 and xi2, xi4 >= 0");
  bool integer = detail::is_small_integer(xi2) && detail::is_small_integer(xi4);
  if (method == IntegralMethod::recursion) {
    require(integer, ErrorCode::invalid_argument, "recursion path needs integer xi2, xi4");
  }
  if (method == IntegralMethod::recursion || (method == IntegralMethod::automatic && integer)) {
    auto n2 = static_cast<std::size_t>(xi2), n4 = static_cast<std::size_t>(xi4);
    double v = I1Table(c1, c2, xi1, xi3, n2, n4).at(n2, n4);
    return {v, 1e-13 * (1.0 + static_cast<double>(n2 + n4)) * std::abs(v)};
  }
  return detail::region_quadrature(c1, c2, xi1, xi2, xi3, xi4, std::nullopt, q);
}

inline QuadResult I2(double c1, double c2, double xi1, double xi2, double xi3, double xi4, double xi5,
                     const QuadratureSpec& q = {}, IntegralMethod method = IntegralMethod::automatic) {
  require(c1 > 0 && c2 > 0 && xi1 > 0 && xi2 >= 0 && xi3 > 0 && xi4 >= 0, ErrorCode::invalid_argument,
          "I2 needs c1, c2, xi1, xi3 > 0 and xi2, xi4 >= 0");
  require(xi3 + xi5 / c1 > 0.0, ErrorCode::invalid_argument, "I2 needs xi3 + xi5/c1 > 0");
  bool integer = detail::is_small_integer(xi2) && detail::is_small_integer(xi4);
  if (method == IntegralMethod::recursion) {
    require(integer, ErrorCode::invalid_argument, "recursion path needs integer xi2, xi4");
  }
  if (method == IntegralMethod::recursion || (method == IntegralMethod::automatic && integer)) {
    auto n2 = static_cast<std::size_t>(xi2), n4 = static_cast<std::size_t>(xi4);
    double v = I2Table(c1, c2, xi1, xi3, xi5, n2, n4).at(n2, n4);
    return {v, 1e-13 * (1.0 + static_cast<double>(n2 + n4)) * std::abs(v)};
  }
  return detail::region_quadrature(c1, c2, xi1, xi2, xi3, xi4, xi5, q);
}

// ---------------------------------------------------------------------------------------------
// Edge density g(x, d1, d2) = g1 + g2 + g3.

struct EdgeDensity {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
  double abs_err = 0.0;
  double total() const { return g1 + g2 + g3; }
};

namespace detail {

/// Γ(d+δ)/(Γ(d-i)Γ(δ+i)) via log-gamma.
inline double gamma_ratio(double d, double delta, int i) {
  return std::exp(std::lgamma(d + delta) - std::lgamma(d - i) - std::lgamma(delta + i));
}

inline void check_edge_params(const ModelParams& p) {
  require(p.alpha > 0 && p.beta > 0 && p.gamma > 0 && p.delta_in > 0 && p.delta_out > 0, ErrorCode::invalid_argument,
          "edge densities need alpha, beta, gamma, delta_in, delta_out > 0");
}

}  // namespace detail

inline EdgeDensity g_edge_parts(double x, std::uint64_t d1, std::uint64_t d2, const ModelParams& p,
                                const QuadratureSpec& q = {}, IntegralMethod method = IntegralMethod::automatic) {
  detail::check_edge_params(p);
  require(x >= 0.0 && x <= 1.0, ErrorCode::invalid_argument, "x must lie in [0,1]");
  EdgeDensity out;
  if (d1 == 0 || d2 == 0 || x == 0.0) return out;
  double ci = c_in_at(p, x), co = c_out_at(p, x);
  double di = p.delta_in, dout = p.delta_out;
  double vr = p.alpha + p.gamma;
  std::array<double, 2> pin{p.alpha / vr, p.gamma / vr};
  std::array<double, 2> pout{p.gamma / vr, p.alpha / vr};
  double D1 = static_cast<double>(d1), D2 = static_cast<double>(d2);
  double xi5 = 1.0 - ci - co;

  for (int i = 0; i <= 1; ++i) {
    if (d1 < static_cast<std::uint64_t>(i + 1)) continue;
    auto r = I1(ci, co, dout + 1.0 / co + i, D1 - i - 1, di + co / ci + 1.0, D2 - 1, q, method);
    double pre = pout[i] / (ci * co) * detail::gamma_ratio(D1, dout, i) * detail::gamma_ratio(D2, di, 0) / di;
    out.g1 += pre * r.value;
    out.abs_err += pre * r.abs_err;
  }
  double s1 = p.gamma / vr * x * x / (1.0 + dout * x);
  out.g1 *= s1;
  double err1 = out.abs_err * s1;

  double err2 = 0.0;
  for (int i = 0; i <= 1; ++i) {
    if (d2 < static_cast<std::uint64_t>(i + 1)) continue;
    auto r = I1(co, ci, di + 1.0 / ci + i, D2 - i - 1, dout + ci / co + 1.0, D1 - 1, q, method);
    double pre = pin[i] / (ci * co) * detail::gamma_ratio(D1, dout, 0) / dout * detail::gamma_ratio(D2, di, i);
    out.g2 += pre * r.value;
    err2 += pre * r.abs_err;
  }
  double s2 = p.alpha / vr * x * x / (1.0 + di * x);
  out.g2 *= s2;
  err2 *= s2;

  double err3 = 0.0;
  for (int i = 0; i <= 1; ++i) {
    for (int j = 0; j <= 1; ++j) {
      if (d1 < static_cast<std::uint64_t>(i + 1) || d2 < static_cast<std::uint64_t>(j + 1)) continue;
      auto ra = I2(ci, co, dout + 1.0 / co + i, D1 - i - 1, di + co / ci + 1.0 + j, D2 - j - 1, xi5, q, method);
      auto rb = I2(co, ci, di + 1.0 / ci + j, D2 - j - 1, dout + ci / co + 1.0 + i, D1 - i - 1, xi5, q, method);
      double pre = pout[i] * pin[j] / (ci * co) * detail::gamma_ratio(D1, dout, i) * detail::gamma_ratio(D2, di, j);
      out.g3 += pre * (ra.value + rb.value);
      err3 += pre * (ra.abs_err + rb.abs_err);
    }
  }
  double s3 = x * x * (1.0 - x) / ((1.0 + di * x) * (1.0 + dout * x));
  out.g3 *= s3;
  out.abs_err = err1 + err2 + err3 * s3;
  return out;
}

inline double g_edge_density(double x, std::uint64_t d1, std::uint64_t d2, const ModelParams& p,
                             const QuadratureSpec& q = {}, IntegralMethod method = IntegralMethod::automatic) {
  return g_edge_parts(x, d1, d2, p, q, method).total();
}

// ---------------------------------------------------------------------------------------------
// c_X and its limits.

struct EdgeConstants {
  std::array<double, 2> A{};
  std::array<double, 2> B{};
  std::array<std::array<double, 2>, 2> C{};  // C[i][j]
};

inline EdgeConstants edge_constants(const TheoryParams& th) {
  const auto& p = th.model;
  double vr = p.alpha + p.gamma;
  double k_in = 1.0 + p.delta_in * vr, k_out = 1.0 + p.delta_out * vr;
  double cc = th.cbar_in * th.cbar_out;
  auto G = [](double v) { return std::tgamma(v); };
  double di = p.delta_in, dout = p.delta_out, al = p.alpha, be = p.beta, ga = p.gamma;
  EdgeConstants k;
  k.A[0] = ga * ga / (k_out * cc * G(dout) * G(1 + di));
  k.A[1] = al * ga / (k_out * cc * G(1 + dout) * G(1 + di));
  k.B[0] = al * al / (k_in * cc * G(1 + dout) * G(di));
  k.B[1] = al * ga / (k_in * cc * G(1 + dout) * G(1 + di));
  double kk = k_in * k_out * cc;
  k.C[0][0] = be * al * ga / (kk * G(dout) * G(di));
  k.C[0][1] = be * ga * ga / (kk * G(dout) * G(di + 1));
  k.C[1][0] = be * al * al / (kk * G(dout + 1) * G(di));
  k.C[1][1] = be * al * ga / (kk * G(dout + 1) * G(di + 1));
  return k;
}

struct CX {
  double cx1 = 0.0;
  double cx2 = 0.0;
  double cx3 = 0.0;
  double abs_err = 0.0;
  bool logarithmic_branch = false;
  double total() const { return cx1 + cx2 + cx3; }
};

inline CX c_X(std::uint64_t d1, std::uint64_t d2, const TheoryParams& th, const QuadratureSpec& q = {}) {
  detail::check_edge_params(th.model);
  require(d1 >= 2 && d2 >= 2, ErrorCode::invalid_argument, "c_X needs d1 >= 2 and d2 >= 2");
  const auto& p = th.model;
  double ci = th.cbar_in, co = th.cbar_out;
  double s = ci + co;
  double eps = 1.0 - s;
  bool log_branch = th.regime == Regime::sum_eq_1;
  // the generic branch divides a cancelling bracket by 1 - s, so tighten the kappa tolerances to match
  QuadratureSpec kq = q;
  if (!log_branch) {
    double shrink = std::min(1.0, std::abs(eps));
    kq.abs_tol = std::max(1e-15, q.abs_tol * shrink);
    kq.rel_tol = std::max(2e-14, q.rel_tol * shrink);
  }
  auto K = edge_constants(th);
  double D1 = static_cast<double>(d1), D2 = static_cast<double>(d2);
  double r1 = co / ci, r2 = ci / co;
  double x1 = D1 / std::pow(D2, r1);
  double x2 = D2 / std::pow(D1, r2);
  double di = p.delta_in, dout = p.delta_out;
  CX out;
  out.logarithmic_branch = log_branch;
  double err = 0.0;

  double pre1 = std::pow(D1, -1.0 / co) * std::pow(D2, -r1 - 1.0);
  for (int i = 0; i <= 1; ++i) {
    auto k = kappa(dout + 1.0 / co + i, di + r1 + 1.0, r1, x1, kq);
    out.cx1 += K.A[i] * k.value;
    err += K.A[i] * k.abs_err * pre1;
  }
  out.cx1 *= pre1;

  double pre2 = std::pow(D1, -r2 - 1.0) * std::pow(D2, -1.0 / ci);
  for (int i = 0; i <= 1; ++i) {
    auto k = kappa(di + 1.0 / ci + i, dout + r2 + 1.0, r2, x2, kq);
    out.cx2 += K.B[i] * k.value;
    err += K.B[i] * k.abs_err * pre2;
  }
  out.cx2 *= pre2;

  double pre3 = std::pow(D1, -1.0 / co) * std::pow(D2, -1.0 / ci);
  for (int i = 0; i <= 1; ++i) {
    for (int j = 0; j <= 1; ++j) {
      double ai = dout + 1.0 / co + i, bj = di + 1.0 / ci + j;
      double c = K.C[i][j];
      if (log_branch) {
        auto ka = kappa(ai, bj, r1, x1, kq);
        auto kad = kappa_dc2(ai, bj, r1, x1, kq);
        auto kb = kappa(bj, ai, r2, x2, kq);
        auto kbd = kappa_dc2(bj, ai, r2, x2, kq);
        out.cx3 += c * ((ka.value * std::log(D2) - kad.value) / ci + (kb.value * std::log(D1) - kbd.value) / co);
        err += c * pre3 *
               ((ka.abs_err * std::log(D2) + kad.abs_err) / ci + (kb.abs_err * std::log(D1) + kbd.abs_err) / co);
      } else {
        auto ka = kappa(ai, di + r1 + 1.0 + j, r1, x1, kq);
        auto kb = kappa(bj, dout + r2 + 1.0 + i, r2, x2, kq);
        double wa = std::pow(D2, eps / ci), wb = std::pow(D1, eps / co);
        double gg = std::exp(std::lgamma(ai) + std::lgamma(bj));
        out.cx3 += c / eps * (wa * ka.value + wb * kb.value - gg);
        err += std::abs(c / eps) * pre3 * (wa * ka.abs_err + wb * kb.abs_err);
      }
    }
  }
  out.cx3 *= pre3;
  out.abs_err = err;
  return out;
}

enum class LimitDirection { to_zero, to_infinity };

struct Asymptote {
  double value = 0.0;
  double constant = 0.0;
  std::string constant_name;
  std::string profile;
};

/// The D_+ constant, shared by both limit directions.
inline double d_plus(const TheoryParams& th) {
  auto K = edge_constants(th);
  double ci = th.cbar_in, co = th.cbar_out;
  double sum = 0.0;
  for (int i = 0; i <= 1; ++i) {
    for (int j = 0; j <= 1; ++j) {
      sum += K.C[i][j] / (ci + co - 1.0) *
             std::exp(std::lgamma(th.model.delta_out + 1.0 / co + i) + std::lgamma(th.model.delta_in + 1.0 / ci + j));
    }
  }
  return sum;
}

/// Leading term of c_X as d1, d2 grow with d1^c̄_in/d2^c̄_out tending to 0 or to infinity.
/// The supplied direction must agree with the side of 1 that the ratio is on.
inline Asymptote c_X_asymptote(std::uint64_t d1, std::uint64_t d2, const TheoryParams& th, LimitDirection dir) {
  detail::check_edge_params(th.model);
  require(d1 >= 2 && d2 >= 2, ErrorCode::invalid_argument, "c_X_asymptote needs d1 >= 2 and d2 >= 2");
  double ci = th.cbar_in, co = th.cbar_out, s = ci + co;
  double D1 = static_cast<double>(d1), D2 = static_cast<double>(d2);
  double log_ratio = ci * std::log(D1) - co * std::log(D2);
  require(dir == LimitDirection::to_zero ? log_ratio <= 0.0 : log_ratio >= 0.0, ErrorCode::invalid_argument,
          "direction disagrees with d1^cbar_in / d2^cbar_out");
  auto K = edge_constants(th);
  double di = th.model.delta_in, dout = th.model.delta_out;
  auto G = [](double v) { return std::exp(std::lgamma(v)); };
  double base = std::pow(D1, -1.0 / co) * std::pow(D2, -1.0 / ci);
  Asymptote out;
  if (th.regime == Regime::sum_gt_1) {
    out.constant = d_plus(th);
    out.constant_name = "D_+";
    out.profile = "d1^(-1/cbar_out) d2^(-1/cbar_in)";
    out.value = out.constant * base;
    return out;
  }
  if (th.regime == Regime::sum_eq_1) {
    double sum = 0.0;
    for (int i = 0; i <= 1; ++i)
      for (int j = 0; j <= 1; ++j) sum += K.C[i][j] * G(dout + 1.0 / co + i) * G(di + 1.0 / ci + j);
    if (dir == LimitDirection::to_zero) {
      out.constant = sum / co;
      out.constant_name = "D_0";
      out.profile = "d1^(-1/cbar_out) d2^(-1/cbar_in) ln d1";
      out.value = out.constant * base * std::log(D1);
    } else {
      out.constant = sum / ci;
      out.constant_name = "D'_0";
      out.profile = "d1^(-1/cbar_out) d2^(-1/cbar_in) ln d2";
      out.value = out.constant * base * std::log(D2);
    }
    return out;
  }
  double r1 = co / ci, r2 = ci / co;
  if (dir == LimitDirection::to_zero) {
    double c = (K.B[0] * G(di + 1.0 / ci) + K.B[1] * G(di + 1.0 / ci + 1.0)) * G(dout + r2 + 1.0);
    for (int i = 0; i <= 1; ++i)
      for (int j = 0; j <= 1; ++j) c += K.C[i][j] / (1.0 - s) * G(di + 1.0 / ci + j) * G(dout + r2 + 1.0 + i);
    out.constant = c;
    out.constant_name = "D_-";
    out.profile = "d1^(-(cbar_in+cbar_out)/cbar_out) d2^(-1/cbar_in)";
    out.value = c * std::pow(D1, -s / co) * std::pow(D2, -1.0 / ci);
  } else {
    double c = (K.A[0] * G(dout + 1.0 / co) + K.A[1] * G(dout + 1.0 / co + 1.0)) * G(di + r1 + 1.0);
    for (int i = 0; i <= 1; ++i)
      for (int j = 0; j <= 1; ++j) c += K.C[i][j] / (1.0 - s) * G(di + r1 + 1.0 + j) * G(dout + 1.0 / co + i);
    out.constant = c;
    out.constant_name = "D'_-";
    out.profile = "d1^(-1/cbar_out) d2^(-(cbar_in+cbar_out)/cbar_in)";
    out.value = c * std::pow(D1, -1.0 / co) * std::pow(D2, -s / ci);
  }
  return out;
}

}  // namespace dpa
