// Globally adaptive Gauss-Kronrod integration with explicit tail control.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"

namespace dpa {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 40;
  std::size_t max_intervals = 20000;
};

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
};

/// Keeps every subinterval in a max-heap on its error estimate and bisects the worst one
/// until the summed error meets the target.
class AdaptiveIntegrator {
 public:
  using Fn = std::function<double(double)>;

  AdaptiveIntegrator(Fn f, QuadratureSpec spec) : f_(std::move(f)), spec_(spec) {}

  void add_segment(double a, double b) {
    if (!(b > a)) return;
    push(a, b, 0);
  }

  /// Refines until the summed error is within `target(value)`.
  void refine(const std::function<double(double)>& target) {
    resum();
    while (error_ > target(value_)) {
      require(!heap_.empty(), ErrorCode::quadrature_not_converged, "no interval left to refine");
      Piece worst = heap_.top();
      if (worst.depth >= spec_.max_depth || heap_.size() >= spec_.max_intervals) {
        throw Error(ErrorCode::quadrature_not_converged,
                    "error " + std::to_string(error_) + " above target " + std::to_string(target(value_)) +
                        " at depth " + std::to_string(worst.depth));
      }
      heap_.pop();
      value_ -= worst.value;
      error_ -= worst.error;
      double mid = 0.5 * (worst.a + worst.b);
      push(worst.a, mid, worst.depth + 1);
      push(mid, worst.b, worst.depth + 1);
      if (++since_resum_ > 256) resum();
    }
  }

  double value() const { return value_; }
  double error() const { return error_; }
  std::size_t intervals() const { return heap_.size(); }

 private:
  struct Piece {
    double a, b, value, error;
    int depth;
    bool operator<(const Piece& o) const { return error < o.error; }
  };

  void push(double a, double b, int depth) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f_, a, b, 0, 0.0, &err);
    require(std::isfinite(v), ErrorCode::quadrature_not_converged, "integrand not finite");
    // boost reports the error on the reference interval [-1, 1]
    err *= 0.5 * (b - a);
    // a piece can report zero error while still round-off limited; floor it
    err = std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(v));
    heap_.push({a, b, v, err, depth});
    value_ += v;
    error_ += err;
  }

  void resum() {
    since_resum_ = 0;
    auto copy = heap_;
    value_ = 0.0;
    error_ = 0.0;
    while (!copy.empty()) {
      value_ += copy.top().value;
      error_ += copy.top().error;
      copy.pop();
    }
  }

  Fn f_;
  QuadratureSpec spec_;
  std::priority_queue<Piece> heap_;
  double value_ = 0.0;
  double error_ = 0.0;
  int since_resum_ = 0;
};

/// Integral over a finite interval split at the given interior points.
inline QuadResult integrate(const std::function<double(double)>& f, double a, double b, const QuadratureSpec& spec,
                            std::vector<double> breakpoints = {}) {
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  AdaptiveIntegrator integ(f, spec);
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    if (breakpoints[k] >= a && breakpoints[k + 1] <= b) integ.add_segment(breakpoints[k], breakpoints[k + 1]);
  }
  integ.refine([&](double v) { return spec.abs_tol + spec.rel_tol * std::abs(v); });
  return {integ.value(), integ.error()};
}

/// Integral over the whole line (or a half-line when a side is finite). The range grows outward
/// from the core breakpoints until the supplied tail bounds fall below a small share of the tolerance.
/// lower_tail(s) must bound the integral of |f| over (-inf, s]; upper_tail(s) over [s, +inf).
struct TailBounds {
  std::function<double(double)> lower;  // empty when the lower limit is finite
  std::function<double(double)> upper;  // empty when the upper limit is finite
};

inline QuadResult integrate_outward(const std::function<double(double)>& f, std::vector<double> core,
                                    const TailBounds& tails, const QuadratureSpec& spec, double step = 1.0,
                                    double growth = 1.5) {
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());
  require(core.size() >= 2, ErrorCode::invalid_argument, "integrate_outward needs at least two breakpoints");
  AdaptiveIntegrator integ(f, spec);
  for (std::size_t k = 0; k + 1 < core.size(); ++k) integ.add_segment(core[k], core[k + 1]);
  double lo = core.front();
  double hi = core.back();
  double lo_step = step, hi_step = step;
  auto target = [&](double v) { return spec.abs_tol + spec.rel_tol * std::abs(v); };
  for (int rounds = 0;; ++rounds) {
    // the quadrature gets half the budget, the truncated tails a tenth
    integ.refine([&](double v) { return 0.5 * target(v); });
    double budget = 0.05 * target(integ.value());
    double lo_bound = tails.lower ? tails.lower(lo) : 0.0;
    double hi_bound = tails.upper ? tails.upper(hi) : 0.0;
    if (lo_bound <= budget && hi_bound <= budget) {
      return {integ.value(), integ.error() + lo_bound + hi_bound};
    }
    require(rounds < 400, ErrorCode::quadrature_not_converged, "tail bounds never met the tolerance");
    if (lo_bound > budget) {
      integ.add_segment(lo - lo_step, lo);
      lo -= lo_step;
      lo_step *= growth;
    }
    if (hi_bound > budget) {
      integ.add_segment(hi, hi + hi_step);
      hi += hi_step;
      hi_step *= growth;
    }
  }
}

}  // namespace dpa
