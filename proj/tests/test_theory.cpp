#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>

#include "dpa/dpa.hpp"

using namespace dpa;

namespace {

const ModelParams kPStar{0.25, 0.5, 0.25, 1.0, 1.0};
const ModelParams kPDagger{0.2, 0.5, 0.3, 2.0, 1.0};
const ModelParams kPDDagger{1.0 / 3, 1.0 / 3, 1.0 / 3, 0.1, 0.1};

const double kGrid[] = {0.5, 1.0, 2.5};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

QuadratureSpec tight() {
  QuadratureSpec q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-12;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------------------------

TEST(DeriveTheory, SymmetricModel) {
  auto th = derive_theory(kPStar);
  EXPECT_NEAR(th.cbar_in, 0.5, 1e-15);
  EXPECT_NEAR(th.cbar_out, 0.5, 1e-15);
  ASSERT_TRUE(th.C_in.has_value());
  EXPECT_NEAR(*th.C_in, 4.0, 1e-12);
  EXPECT_EQ(th.regime, Regime::sum_eq_1);
  EXPECT_DOUBLE_EQ(th.a, 0.5);
}

TEST(DeriveTheory, AsymmetricModel) {
  auto th = derive_theory(kPDagger);
  EXPECT_NEAR(th.cbar_in, 0.35, 1e-15);
  EXPECT_NEAR(th.cbar_out, 8.0 / 15.0, 1e-15);
  EXPECT_EQ(th.regime, Regime::sum_lt_1);
  EXPECT_EQ(derive_theory(kPDDagger).regime, Regime::sum_gt_1);
  EXPECT_NEAR(derive_theory(kPDDagger).cbar_in, 0.625, 1e-15);
}

TEST(DeriveTheory, DegenerateCases) {
  auto th = derive_theory({0.0, 0.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(th.cbar_in, 0.0);
  EXPECT_FALSE(th.C_in.has_value());
  try {
    fbar(1, th);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_case);
  }
  auto one = derive_theory({1.0, 0.0, 0.0, 0.0, 1.0});
  EXPECT_EQ(one.cbar_in, 1.0);
  EXPECT_THROW(fbar(2, one), Error);
}

TEST(Fbar, SymmetricModelValues) {
  auto th = derive_theory(kPStar);
  EXPECT_NEAR(fbar(0, th), 1.0 / 6, 1e-15);
  EXPECT_NEAR(fbar(1, th), 1.0 / 6, 1e-14);
  EXPECT_NEAR(fbar(2, th), 1.0 / 15, 1e-14);
  EXPECT_GT(fbar(1000000, th), 0.0);
  EXPECT_NEAR(fbar(1000000, th) * 1e18, 4.0, 1e-4);
}

TEST(Fbar, NormalizationsWithExactTail) {
  // Σ_{d>D} Γ(d+a)/Γ(d+b) = Γ(D+1+a)/((b-a-1)Γ(D+b)) for b > a+1
  auto th = derive_theory(kPStar);
  const std::uint64_t D = 10000;
  double delta = kPStar.delta_in, c = th.cbar_in, b = delta + 1.0 + 1.0 / c;
  auto tail = [&](double a) {
    return std::exp(std::lgamma(D + 1.0 + a) - std::lgamma(D + b)) / (b - a - 1.0);
  };
  double s0 = 0, s1 = 0;
  for (std::uint64_t d = 0; d <= D; ++d) {
    double f = fbar(d, th);
    s0 += f;
    s1 += static_cast<double>(d) * f;
  }
  double t0 = *th.C_in * tail(delta);
  double t1 = *th.C_in * (tail(delta + 1.0) - delta * tail(delta));
  EXPECT_NEAR(s0, kPStar.alpha + kPStar.gamma, 1e-6);
  EXPECT_NEAR(s0 + t0, kPStar.alpha + kPStar.gamma, 1e-9);
  EXPECT_NEAR(s1 + t1, 1.0, 1e-9);
  // the plain first-moment partial sum converges only like 1/D
  EXPECT_NEAR(s1, 1.0, 1.01 * t1);
}

TEST(FIn, BaseValueAndConsistencyWithFbar) {
  auto th = derive_theory(kPStar);
  for (double x : {0.0, 0.3, 0.5, 1.0}) {
    double c = c_in_at(kPStar, x);
    EXPECT_NEAR(f_in(0, x, kPStar), 0.5 * x / (1.0 + c), 1e-15);
  }
  for (std::uint64_t d = 0; d <= 40; ++d) {
    EXPECT_NEAR(f_in(d, 0.5, kPStar), fbar(d, th), 1e-14 * (1 + fbar(d, th)));
  }
  auto thd = derive_theory(kPDagger);
  for (std::uint64_t d = 0; d <= 40; ++d) EXPECT_LE(rel(f_in(d, 0.5, kPDagger), fbar(d, thd)), 1e-11);
}

TEST(FIn, ZeroAtXZero) {
  for (std::uint64_t d = 1; d <= 10; ++d) {
    EXPECT_EQ(f_in(d, 0.0, kPStar), 0.0);
    EXPECT_EQ(f_in_gamma_form(d, 0.0, kPStar), 0.0);
  }
}

TEST(FIn, GammaFormMatchesProductForm) {
  for (const auto& p : {kPStar, kPDagger, kPDDagger}) {
    for (double x : {0.1, 0.5, 0.9}) {
      auto seq = f_in_sequence(60, x, p);
      for (std::uint64_t d = 0; d <= 60; ++d) EXPECT_LE(rel(f_in_gamma_form(d, x, p), seq[d]), 1e-10) << d;
    }
  }
}

TEST(FIn, OutIsMirroredIn) {
  for (std::uint64_t d = 0; d < 10; ++d) {
    EXPECT_EQ(f_out(d, 0.4, kPDagger), f_in(d, 0.4, kPDagger.mirrored()));
    EXPECT_EQ(f_out(d, 0.4, kPStar), f_in(d, 0.4, kPStar));
  }
}

TEST(FIn, RecurrenceHoldsIdentically) {
  for (const auto& p : {kPStar, kPDagger, kPDDagger, ModelParams{0.25, 0.5, 0.25, 0.0, 1.0}}) {
    double a = p.alpha / (p.alpha + p.gamma);
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      auto f = f_in_sequence(20, x, p);
      double c = c_in_at(p, x);
      for (std::uint64_t d = 0; d <= 20; ++d) {
        double D = static_cast<double>(d);
        double lhs = (c * (D + p.delta_in) + 1.0) * f[d];
        double rhs = (d > 0 ? c * (D + p.delta_in - 1.0) * f[d - 1] : 0.0) +
                     x * (d == 0 ? a : 0.0) + x * (d == 1 ? 1.0 - a : 0.0);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10) << "d=" << d << " x=" << x;
      }
    }
  }
}

// ---------------------------------------------------------------------------------------------

TEST(Kappa, Examples) {
  EXPECT_EQ(kappa(1, 1, 1, 0).value, 0.0);
  EXPECT_EQ(kappa(2.5, 0.5, 2, 0).value, 0.0);
  EXPECT_NEAR(kappa(1, 1, 1, 1).value, 0.5, 1e-9);
}

TEST(Kappa, SmallXSeries) {
  auto series = [](double c1, double c2, double r, double x, int terms) {
    double s = 0;
    for (int k = 0; k < terms; ++k) {
      s += (k % 2 ? -1.0 : 1.0) * std::pow(x, c1 + k) * std::tgamma(c1 * r + c2 + k * r) /
           (std::tgamma(k + 1.0) * (c1 + k));
    }
    return s;
  };
  double v = kappa(1, 1, 2, 0.01).value;
  EXPECT_NEAR(v, series(1, 1, 2, 0.01, 3), 1e-4);
  // leading term Γ(c1 r + c2)/c1 x^c1 with a relative remainder of order x
  double prev = 1.0;
  for (double x : {1e-2, 1e-3, 1e-4}) {
    double lead = series(1, 1, 2, x, 1);
    double err = rel(kappa(1, 1, 2, x).value, lead);
    EXPECT_LT(err, 10.0 * x);
    EXPECT_LT(err, prev / 5);
    prev = err;
  }
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (double r : {0.5, 1.0, 2.0}) {
        double x = 1e-4;
        EXPECT_LT(rel(kappa(c1, c2, r, x).value, series(c1, c2, r, x, 1)), 0.05) << c1 << ' ' << c2 << ' ' << r;
      }
}

TEST(Kappa, Reflection) {
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (double r : {0.5, 1.0, 2.0})
        for (double x : {0.1, 1.0, 10.0}) {
          double lhs = kappa(c1, c2, r, x).value + kappa(c2, c1, 1.0 / r, std::pow(x, -1.0 / r)).value;
          EXPECT_NEAR(lhs, std::tgamma(c1) * std::tgamma(c2), 1e-7) << c1 << ' ' << c2 << ' ' << r << ' ' << x;
        }
}

TEST(Kappa, IncompleteBetaAtROne) {
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (double x : {0.1, 1.0, 10.0}) {
        EXPECT_NEAR(kappa(c1, c2, 1.0, x).value, kappa_r1_closed_form(c1, c2, x), 1e-8);
      }
}

TEST(Kappa, MonotoneAndBounded) {
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (double r : {0.5, 1.0, 2.0}) {
        double bound = std::tgamma(c1) * std::tgamma(c2);
        double prev = 0.0;
        for (double x : {0.0, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0}) {
          double v = kappa(c1, c2, r, x).value;
          EXPECT_GE(v, prev - 1e-12);
          EXPECT_LE(v, bound + 1e-10);
          prev = v;
        }
      }
}

TEST(Kappa, ErrorEstimateWithinTolerance) {
  QuadratureSpec q;
  auto r = kappa(2.5, 0.5, 2.0, 3.0, q);
  EXPECT_LE(r.abs_err, q.abs_tol + q.rel_tol * r.value);
  EXPECT_THROW(kappa(0.0, 1.0, 1.0, 1.0), Error);
  EXPECT_THROW(kappa(1.0, 1.0, 1.0, -1.0), Error);
}

TEST(KappaDc2, ZeroAtXZero) { EXPECT_EQ(kappa_dc2(1.3, 0.7, 2.0, 0.0).value, 0.0); }

TEST(KappaDc2, MatchesFiniteDifference) {
  auto q = tight();
  const double h = 1e-4;
  struct Pt {
    double c1, c2, r, x;
  };
  for (auto pt : {Pt{1, 1, 1, 1}, Pt{2.5, 0.5, 2, 3}, Pt{0.5, 2.5, 0.5, 0.2}, Pt{1.7, 3.2, 1.3, 10}}) {
    double fd = (kappa(pt.c1, pt.c2 + h, pt.r, pt.x, q).value - kappa(pt.c1, pt.c2 - h, pt.r, pt.x, q).value) / (2 * h);
    double an = kappa_dc2(pt.c1, pt.c2, pt.r, pt.x, q).value;
    EXPECT_LT(rel(an, fd), 1e-5) << pt.c1 << ' ' << pt.c2 << ' ' << pt.r << ' ' << pt.x;
  }
}

TEST(KappaDc2, SmallXLeadingTerm) {
  double prev = 1.0;
  for (double x : {1e-2, 1e-3, 1e-4}) {
    double c1 = 1.0, c2 = 1.5, r = 2.0;
    double g = std::tgamma(c1 * r + c2);
    double lead = boost::math::digamma(c1 * r + c2) * g / c1 * std::pow(x, c1);
    double err = rel(kappa_dc2(c1, c2, r, x).value, lead);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-2);
}

// ---------------------------------------------------------------------------------------------

TEST(I1, Examples) {
  EXPECT_NEAR(I1(1, 1, 1, 0, 1, 0).value, 0.5, 1e-14);
  EXPECT_NEAR(I1(1, 2, 1, 0, 1, 0).value, 1.0 / 3, 1e-14);
  EXPECT_NEAR(I1(1, 1, 1, 0, 1, 1).value, 1.0 / 6, 1e-14);
  EXPECT_NEAR(I1(1, 1, 1, 0, 1, 0, {}, IntegralMethod::quadrature).value, 0.5, 1e-9);
  EXPECT_NEAR(I1(1, 1, 1, 0, 1, 1, {}, IntegralMethod::quadrature).value, 1.0 / 6, 1e-9);
}

TEST(I1, RejectsBadArguments) {
  EXPECT_THROW(I1(0, 1, 1, 0, 1, 0), Error);
  EXPECT_THROW(I1(1, 1, 1, -1, 1, 0), Error);
  EXPECT_THROW(I1(1, 1, 1, 0.5, 1, 0, {}, IntegralMethod::recursion), Error);
}

TEST(I1, NonIntegerExponentsUseQuadrature) {
  // between its integer neighbours in ξ4
  double lo = I1(1.2, 0.8, 1.5, 2, 0.9, 3).value, hi = I1(1.2, 0.8, 1.5, 2, 0.9, 2).value;
  double mid = I1(1.2, 0.8, 1.5, 2, 0.9, 2.5).value;
  EXPECT_LT(mid, hi);
  EXPECT_GT(mid, lo);
}

namespace {

struct Xi {
  double xi1, xi3;
};
const Xi kXi[] = {{1.3, 0.7}, {2.5, 1.9}};

}  // namespace

TEST(I1, RecursionsAgainstQuadrature) {
  QuadratureSpec q;
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (auto [xi1, xi3] : kXi) {
        double Q[7][7];
        for (int j2 = 0; j2 <= 6; ++j2)
          for (int j4 = 0; j4 <= 6; ++j4) {
            Q[j2][j4] = I1(c1, c2, xi1, j2, xi3, j4, q, IntegralMethod::quadrature).value;
            double rec = I1(c1, c2, xi1, j2, xi3, j4, q, IntegralMethod::recursion).value;
            EXPECT_LT(rel(rec, Q[j2][j4]), 1e-6);
          }
        auto beta = [&](int j2) { return boost::math::beta(xi1, j2 + 1.0); };
        for (int j2 = 0; j2 <= 6; ++j2)
          for (int j4 = 0; j4 <= 6; ++j4) {
            double lhs = (c2 * (xi1 + j2) + c1 * (xi3 + j4)) * Q[j2][j4];
            double rhs;
            if (j2 >= 1 && j4 >= 1) {
              rhs = c1 * j4 * Q[j2][j4 - 1] + c2 * j2 * Q[j2 - 1][j4];
            } else if (j2 >= 1) {
              rhs = c1 * beta(j2) + c2 * j2 * Q[j2 - 1][0];
            } else if (j4 >= 1) {
              rhs = c1 * j4 * Q[0][j4 - 1];
            } else {
              rhs = c1 / xi1;
            }
            EXPECT_LT(rel(lhs, rhs), 1e-6) << c1 << ' ' << c2 << ' ' << j2 << ' ' << j4;
          }
      }
}

TEST(I2, Examples) {
  EXPECT_NEAR(I2(1, 1, 1, 0, 1, 0, 1).value, 1.0 / 6, 1e-14);
  EXPECT_NEAR(I2(1, 1, 1, 0, 1, 0, 1, {}, IntegralMethod::quadrature).value, 1.0 / 6, 1e-9);
  // log weight: ∫∫ v<w (-ln w) dv dw = ∫ w(-ln w) dw = 1/4
  EXPECT_NEAR(I2(1, 1, 1, 0, 1, 0, 0, {}, IntegralMethod::quadrature).value, 0.25, 1e-9);
  EXPECT_NEAR(I2(1, 1, 1, 0, 1, 0, 0).value, 0.25, 1e-14);
  EXPECT_THROW(I2(0.5, 1, 1, 0, 0.1, 0, -0.3), Error);
}

TEST(I2, MonotoneInXi4) {
  for (double xi5 : {-0.3, 0.0, 1.0}) {
    for (int j4 = 0; j4 < 6; ++j4) {
      EXPECT_LE(I2(0.8, 1.4, 1.3, 2, 0.9, j4 + 1, xi5).value, I2(0.8, 1.4, 1.3, 2, 0.9, j4, xi5).value);
      EXPECT_LE(I2(0.8, 1.4, 1.3, 2, 0.9, j4 + 1.5, xi5, {}, IntegralMethod::quadrature).value,
                I2(0.8, 1.4, 1.3, 2, 0.9, j4 + 0.5, xi5, {}, IntegralMethod::quadrature).value);
    }
  }
}

TEST(I2, DifferenceOfI1) {
  for (double xi5 : {-0.3, 0.7, 2.0}) {
    double c1 = 0.9;
    double direct = I2(c1, 1.3, 1.2, 3, 1.1, 2, xi5, {}, IntegralMethod::quadrature).value;
    double diff = (I1(c1, 1.3, 1.2, 3, 1.1, 2).value - I1(c1, 1.3, 1.2, 3, 1.1 + xi5 / c1, 2).value) / xi5;
    EXPECT_LT(rel(direct, diff), 1e-7);
  }
}

TEST(I2, RecursionsAgainstQuadrature) {
  QuadratureSpec q;
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (auto [xi1, xi3] : kXi)
        for (double xi5 : {-0.3, 0.0, 1.0}) {
          double Q[7][7];
          for (int j2 = 0; j2 <= 6; ++j2)
            for (int j4 = 0; j4 <= 6; ++j4) {
              Q[j2][j4] = I2(c1, c2, xi1, j2, xi3, j4, xi5, q, IntegralMethod::quadrature).value;
              double rec = I2(c1, c2, xi1, j2, xi3, j4, xi5, q, IntegralMethod::recursion).value;
              EXPECT_LT(rel(rec, Q[j2][j4]), 1e-6);
            }
          for (int j2 = 0; j2 <= 6; ++j2)
            for (int j4 = 0; j4 <= 6; ++j4) {
              double lhs = (c2 * (xi1 + j2) + c1 * (xi3 + j4)) * Q[j2][j4];
              double rhs = I1(c1, c2, xi1, j2, xi3 + xi5 / c1, j4, q, IntegralMethod::quadrature).value;
              if (j4 >= 1) rhs += c1 * j4 * Q[j2][j4 - 1];
              if (j2 >= 1) rhs += c2 * j2 * Q[j2 - 1][j4];
              EXPECT_LT(rel(lhs, rhs), 1e-6) << c1 << ' ' << c2 << ' ' << xi5 << ' ' << j2 << ' ' << j4;
            }
        }
}

TEST(IShift, InequalitiesHoldExactly) {
  for (double c1 : kGrid)
    for (double c2 : kGrid)
      for (auto [xi1, xi3] : kXi) {
        I1Table t1(c1, c2, xi1, xi3, 8, 3);
        double k = (c2 * xi1 + c1 * xi3) / c2;
        for (int d1 = 1; d1 <= 8; ++d1) {
          double cur = t1.at(d1, 3), prev = t1.at(d1 - 1, 3);
          EXPECT_LE(cur, prev);
          EXPECT_LE(prev, (1.0 + k / d1) * cur);
        }
        for (double xi5 : {-0.3, 0.0, 1.0}) {
          if (xi3 + xi5 / c1 <= 0) continue;
          I2Table t2(c1, c2, xi1, xi3, xi5, 8, 3);
          for (int d1 = 1; d1 <= 8; ++d1) {
            double cur = t2.at(d1, 3), prev = t2.at(d1 - 1, 3);
            EXPECT_LE(cur, prev);
            EXPECT_LE(prev, (1.0 + k / d1) * cur);
          }
        }
      }
}

TEST(I1Asymptotics, KappaLimitImprovesAsDegreesDouble) {
  double c1 = 1.0, xi1 = 1.5, xi3 = 0.8;
  for (double r : {0.5, 1.0, 2.0}) {
    double prev = 1e300;
    for (double d : {8.0, 16.0, 32.0}) {
      double i1 = I1(c1, c1 * r, xi1, d, xi3, d).value;
      double k = kappa(xi1, xi3, r, d / std::pow(d, r)).value;
      double err = std::abs(i1 * std::pow(d, xi1 + xi3) / k - 1.0);
      EXPECT_LT(err, prev) << "r=" << r << " d=" << d;
      prev = err;
    }
  }
}

TEST(I2Asymptotics, LogarithmicCaseMeetsItsRate) {
  double c1 = 1.0, xi1 = 1.5, xi3 = 0.8;
  for (double r : {0.5, 1.0, 2.0}) {
    std::vector<double> errs;
    for (double d = 8; d <= 512; d *= 2) {
      double x = d / std::pow(d, r);
      double i2 = I2(c1, c1 * r, xi1, d, xi3, d, 0.0).value;
      double lead = kappa(xi1, xi3, r, x).value * std::log(d) - kappa_dc2(xi1, xi3, r, x).value;
      double err = std::abs(i2 * c1 * std::pow(d, xi1 + xi3) - lead);
      EXPECT_LT(err / (std::log(d) / d + 1.0 / d), 3.0) << "r=" << r << " d=" << d;
      errs.push_back(err);
    }
    // r=0.5 sits on a plateau between d=8 and d=16 before the decay sets in
    for (std::size_t i = 2; i < errs.size(); ++i) EXPECT_LT(errs[i], errs[i - 1]) << "r=" << r << " step " << i;
    EXPECT_LT(errs.back(), errs.front() / 5);
  }
}

// ---------------------------------------------------------------------------------------------

TEST(EdgeDensity, VanishesAtZeroDegree) {
  EXPECT_EQ(g_edge_density(0.5, 0, 5, kPDDagger), 0.0);
  EXPECT_EQ(g_edge_density(0.5, 5, 0, kPDDagger), 0.0);
  EXPECT_THROW(g_edge_density(0.5, 1, 1, ModelParams{0.5, 0.0, 0.5, 1, 1}), Error);
  EXPECT_THROW(g_edge_density(1.5, 1, 1, kPDDagger), Error);
}

namespace {

double grecur_residual(double x, std::uint64_t d1, std::uint64_t d2, const ModelParams& p, IntegralMethod m) {
  auto g = [&](std::uint64_t a, std::uint64_t b) { return g_edge_density(x, a, b, p, {}, m); };
  double ci = c_in_at(p, x), co = c_out_at(p, x);
  double di = p.delta_in, dout = p.delta_out, vr = p.alpha + p.gamma;
  auto fo = f_out_sequence(d1, x, p);
  auto fi = f_in_sequence(d2, x, p);
  double D1 = static_cast<double>(d1), D2 = static_cast<double>(d2);
  double lhs = (ci * (D2 + di) + co * (D1 + dout) + 1.0) * g(d1, d2);
  double rhs = ci * (D2 - 1 + di) * g(d1, d2 - 1) + co * (D1 - 1 + dout) * g(d1 - 1, d2);
  double wo = (D1 - 1 + dout) / (1 + dout * x), wi = (D2 - 1 + di) / (1 + di * x);
  if (d2 == 1) rhs += p.gamma / vr * x * wo * fo[d1 - 1];
  if (d1 == 1) rhs += p.alpha / vr * x * wi * fi[d2 - 1];
  rhs += (1 - x) * wo * wi * fo[d1 - 1] * fi[d2 - 1];
  return std::abs(lhs - rhs) / std::abs(lhs);
}

}  // namespace

TEST(EdgeDensity, RecurrenceHolds) {
  for (const auto& p : {kPDDagger, kPDagger, kPStar})
    for (double x : {0.3, 0.5, 0.8})
      for (std::uint64_t d1 = 1; d1 <= 3; ++d1)
        for (std::uint64_t d2 = 1; d2 <= 3; ++d2)
          EXPECT_LT(grecur_residual(x, d1, d2, p, IntegralMethod::automatic), 1e-5) << x << ' ' << d1 << ' ' << d2;
}

TEST(EdgeDensity, RecurrenceHoldsWithQuadratureIntegrals) {
  for (double x : {0.3, 0.5, 0.8}) EXPECT_LT(grecur_residual(x, 1, 1, kPDDagger, IntegralMethod::quadrature), 1e-5);
  EXPECT_LT(grecur_residual(0.5, 2, 3, kPDagger, IntegralMethod::quadrature), 1e-5);
}

TEST(EdgeDensity, RecursionAndQuadratureAgree) {
  for (std::uint64_t d1 : {1, 2, 5})
    for (std::uint64_t d2 : {1, 3, 6}) {
      double a = g_edge_density(2.0 / 3, d1, d2, kPDDagger, {}, IntegralMethod::recursion);
      double b = g_edge_density(2.0 / 3, d1, d2, kPDDagger, {}, IntegralMethod::quadrature);
      EXPECT_LT(rel(a, b), 1e-7);
    }
  EXPECT_NEAR(g_edge_density(0.5, 1, 1, kPDDagger), 0.00441700960219479, 1e-12);
}

TEST(EdgeDensity, PartsArePositive) {
  auto parts = g_edge_parts(2.0 / 3, 3, 4, kPDDagger);
  EXPECT_GT(parts.g1, 0);
  EXPECT_GT(parts.g2, 0);
  EXPECT_GT(parts.g3, 0);
  EXPECT_NEAR(parts.total(), g_edge_density(2.0 / 3, 3, 4, kPDDagger), 1e-18);
}

// ---------------------------------------------------------------------------------------------

TEST(CX, LogarithmicBranchUnderSymmetricModel) {
  auto th = derive_theory(kPStar);
  auto c = c_X(5, 7, th);
  EXPECT_TRUE(c.logarithmic_branch);
  EXPECT_TRUE(std::isfinite(c.total()));
  EXPECT_GT(c.total(), 0.0);
  EXPECT_FALSE(c_X(5, 7, derive_theory(kPDDagger)).logarithmic_branch);
  EXPECT_THROW(c_X(1, 5, th), Error);
}

TEST(CX, ApproachesEdgeDensityAsDegreesGrow) {
  auto th = derive_theory(kPDDagger);
  double x = kPDDagger.alpha + kPDDagger.gamma;
  double prev = 1.0;
  for (std::uint64_t d : {10, 20, 40}) {
    double gap = rel(c_X(d, d, th).total(), g_edge_density(x, d, d, kPDDagger));
    EXPECT_LT(gap, prev);
    EXPECT_LT(gap * static_cast<double>(d), 1.5);
    prev = gap;
  }
}

TEST(CX, ApproachesDPlusProfile) {
  auto th = derive_theory(kPDDagger);
  double e = 1.0 / th.cbar_in + 1.0 / th.cbar_out;
  double dp = d_plus(th);
  double prev = 1e300;
  for (std::uint64_t d : {25, 50, 100}) {
    double ratio = c_X(d, d, th).total() * std::pow(static_cast<double>(d), e) / dp;
    EXPECT_LT(std::abs(ratio - 1.0), prev);
    prev = std::abs(ratio - 1.0);
  }
}

TEST(CX, ContinuousAcrossRegimeThreshold) {
  auto with_sum = [](double s) {
    // keep the symmetric model's out side, move cbar_in so that cbar_in + cbar_out = s
    ModelParams p = kPStar;
    double ci = s - 0.5;
    p.delta_in = (0.75 / ci - 1.0) / 0.5;
    return derive_theory(p);
  };
  auto lo = with_sum(1.0 - 1e-5), hi = with_sum(1.0 + 1e-5), mid = derive_theory(kPStar);
  EXPECT_EQ(lo.regime, Regime::sum_lt_1);
  EXPECT_EQ(hi.regime, Regime::sum_gt_1);
  for (auto [d1, d2] : {std::pair<int, int>{4, 4}, {10, 10}, {5, 30}}) {
    double a = c_X(d1, d2, lo).total(), b = c_X(d1, d2, hi).total(), m = c_X(d1, d2, mid).total();
    EXPECT_LT(rel(a, b), 0.01);
    EXPECT_LT(rel(a, m), 0.01);
  }
}

TEST(CXAsymptote, DPlusPositiveAndDirectionIndependent) {
  auto th = derive_theory(kPDDagger);
  auto up = c_X_asymptote(50, 50, th, LimitDirection::to_infinity);
  auto down = c_X_asymptote(50, 50, th, LimitDirection::to_zero);
  EXPECT_EQ(up.constant_name, "D_+");
  EXPECT_EQ(up.constant, down.constant);
  EXPECT_EQ(up.value, down.value);
  EXPECT_GT(up.constant, 0.0);
  EXPECT_TRUE(std::isfinite(up.constant));

  // four C_ij terms by hand with plain tgamma
  const auto& p = kPDDagger;
  double ci = th.cbar_in, co = th.cbar_out, vr = p.alpha + p.gamma;
  double kk = (1 + p.delta_in * vr) * (1 + p.delta_out * vr) * ci * co;
  double C[2][2] = {
      {p.beta * p.alpha * p.gamma / (kk * std::tgamma(p.delta_out) * std::tgamma(p.delta_in)),
       p.beta * p.gamma * p.gamma / (kk * std::tgamma(p.delta_out) * std::tgamma(p.delta_in + 1))},
      {p.beta * p.alpha * p.alpha / (kk * std::tgamma(p.delta_out + 1) * std::tgamma(p.delta_in)),
       p.beta * p.alpha * p.gamma / (kk * std::tgamma(p.delta_out + 1) * std::tgamma(p.delta_in + 1))}};
  double hand = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      hand += C[i][j] * std::tgamma(p.delta_out + 1 / co + i) * std::tgamma(p.delta_in + 1 / ci + j) / (ci + co - 1);
  EXPECT_LT(rel(up.constant, hand), 1e-6);
}

TEST(CXAsymptote, LogarithmicRegimeSelectsConstantByDirection) {
  auto th = derive_theory(kPStar);
  auto up = c_X_asymptote(400, 20, th, LimitDirection::to_infinity);
  EXPECT_EQ(up.constant_name, "D'_0");
  EXPECT_NE(up.profile.find("ln d2"), std::string::npos);
  auto down = c_X_asymptote(20, 400, th, LimitDirection::to_zero);
  EXPECT_EQ(down.constant_name, "D_0");
  EXPECT_NE(down.profile.find("ln d1"), std::string::npos);
}

TEST(CXAsymptote, SubcriticalRegimeConstants) {
  auto th = derive_theory(kPDagger);
  ASSERT_EQ(th.regime, Regime::sum_lt_1);
  EXPECT_EQ(c_X_asymptote(2, 5000, th, LimitDirection::to_zero).constant_name, "D_-");
  EXPECT_EQ(c_X_asymptote(5000, 2, th, LimitDirection::to_infinity).constant_name, "D'_-");
  EXPECT_GT(c_X_asymptote(5000, 2, th, LimitDirection::to_infinity).constant, 0.0);
}

TEST(CXAsymptote, DirectionMismatchIsError) {
  auto th = derive_theory(kPDDagger);
  EXPECT_THROW(c_X_asymptote(2, 100, th, LimitDirection::to_infinity), Error);
  EXPECT_THROW(c_X_asymptote(100, 2, th, LimitDirection::to_zero), Error);
}
