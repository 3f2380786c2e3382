#include <gtest/gtest.h>

#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/model_geometry.hpp"
#include "fraclab/special_functions.hpp"

using namespace fraclab;

namespace {

double closed_b(int n, double g) {
  return std::exp2(-4.0 * g / n) * gamma_fn(-g / n) * gamma_fn((n + 2.0 * g) / (2.0 * n)) /
         (gamma_fn(g / n) * gamma_fn((n - 2.0 * g) / (2.0 * n)));
}

// f(x(r)) with x = r^{2n}/16: value and first two r-derivatives of a Gauss series.
struct Jet {
  double v, d1, d2;
};
Jet series_jet(double a, double b, double c, int n, double r) {
  const double x = std::pow(r, 2.0 * n) / 16.0;
  const double xr = 2.0 * n * x / r, xrr = (2.0 * n - 1.0) * xr / r;
  const double f = hyp2f1(a, b, c, x);
  const double f1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, x);
  const double f2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, x);
  return {f, f1 * xr, f2 * xr * xr + f1 * xrr};
}

Jet second_branch_jet(int n, double g, double r) {
  const auto G = series_jet((n + 2.0 * g) / (2.0 * n), 0.5, (n + g) / n, n, r);
  const double p = std::pow(r, 2.0 * g), p1 = 2.0 * g * p / r, p2 = (2.0 * g - 1.0) * p1 / r;
  return {p * G.v, p1 * G.v + p * G.d1, p2 * G.v + 2.0 * p1 * G.d1 + p * G.d2};
}

double sup_residual(int n, double g, bool regular, bool second) {
  const auto hp = model_hypergeometric_params(n, g);
  const double B = closed_b(n, g);
  std::vector<double> r, U, dU, d2U;
  const double r_half = std::pow(8.0, 1.0 / (2.0 * n));  // x = 1/2
  for (int i = 1; i <= 200; ++i) {
    const double ri = r_half * i / 200.0;
    Jet j{0, 0, 0};
    if (regular) j = series_jet(hp.a, hp.b, hp.c, n, ri);
    if (second) {
      const auto s = second_branch_jet(n, g, ri);
      const double w = regular ? B : 1.0;
      j = {j.v + w * s.v, j.d1 + w * s.d1, j.d2 + w * s.d2};
    }
    r.push_back(ri);
    U.push_back(j.v);
    dU.push_back(j.d1);
    d2U.push_back(j.d2);
  }
  double sup = 0.0;
  for (double v : model_operator_residual(r, U, dU, d2U, n, g)) sup = std::max(sup, std::abs(v));
  return sup;
}

}  // namespace

TEST(ModelOperator, ConstantAtCriticalOrder) {
  for (int n : {2, 3, 4}) {
    std::vector<double> r{0.1, 0.5, 1.0}, one(3, 1.0), zero(3, 0.0);
    for (double v : model_operator_residual(r, one, zero, zero, n, 0.5 * n)) EXPECT_EQ(v, 0.0);
  }
}

TEST(ModelOperator, ClosedFormSolutionAnnihilated) {
  EXPECT_LE(sup_residual(2, 0.5, true, true), 1e-8);
  EXPECT_LE(sup_residual(4, 1.5, true, true), 1e-8);
  EXPECT_LE(sup_residual(3, 1.25, true, true), 1e-8);
}

TEST(ModelOperator, SecondFrobeniusBranchAnnihilated) {
  EXPECT_LE(sup_residual(3, 1.25, false, true), 1e-8);
  EXPECT_LE(sup_residual(5, 0.7, false, true), 1e-8);
}

TEST(ModelOperator, HypergeometricParametersAreLogarithmicAtOne) {
  for (int n : {2, 3, 5})
    for (double g : {0.3, 1.25}) {
      const auto hp = model_hypergeometric_params(n, g);
      EXPECT_NEAR(hp.c - hp.a - hp.b, 0.0, 1e-15);
    }
}

TEST(ModelProfileSolve, MatchesClosedCoefficient) {
  for (auto [n, g] : {std::pair{2, 0.5}, {3, 1.25}, {4, 1.5}, {5, 1.75}, {3, 0.4}, {4, 2.6}}) {
    const auto p = solve_model_profile(n, g);
    EXPECT_NEAR(p.B / closed_b(n, g), 1.0, 1e-8) << n << " " << g;
    EXPECT_NEAR(p.A, 1.0, 1e-8);
    EXPECT_NEAR(p.U.front(), 1.0, 1e-2);
    for (double u : p.U) EXPECT_GT(u, 0.0);
  }
}

TEST(ModelProfileSolve, NumericSolutionResidual) {
  for (auto [n, g] : {std::pair{2, 0.5}, {3, 1.25}, {4, 1.5}, {5, 1.75}})
    EXPECT_LE(model_residual_sup(solve_model_profile(n, g)), 1e-7) << n << " " << g;
}

TEST(ModelProfileSolve, RejectsPoles) {
  EXPECT_THROW(solve_model_profile(4, 2.0), PoleError);
  EXPECT_THROW(solve_model_profile(3, 3.5), std::invalid_argument);
  EXPECT_THROW(q2gamma_closed(4, 1.0), PoleError);
}

TEST(ModelQ, ClosedMatchesNumeric) {
  for (auto [n, g] : {std::pair{2, 0.5}, {3, 1.25}, {4, 1.5}, {5, 1.75}}) {
    const double qc = q2gamma_closed(n, g);
    const double qn = q2gamma_numeric(solve_model_profile(n, g));
    EXPECT_LE(std::abs(qn - qc) / std::abs(qc), 1e-5) << n << " " << g;
  }
}

TEST(ModelQ, NegativeBetweenOneAndTwo) {
  for (int n : {3, 4, 5, 8})
    for (int j = 1; j < 20; ++j) EXPECT_LT(q2gamma_closed(n, 1.0 + j / 20.0), 0.0);
}

TEST(ModelQ, PositiveBelowOne) {
  for (int n : {2, 3, 4, 5})
    for (int j = 1; j < 20; ++j) EXPECT_GT(q2gamma_closed(n, j / 20.0), 0.0);
}

TEST(ModelQ, SignOfBFollowsQ) {
  const auto p = solve_model_profile(4, 1.5);
  EXPECT_LT(p.B, 0.0);
  EXPECT_GT(d_gamma(1.5), 0.0);
}

TEST(AdaptedFunction, CoefficientAndLeadingTerm) {
  for (auto [n, g] : {std::pair{2, 0.5}, {3, 1.25}, {4, 1.5}, {5, 1.75}}) {
    const auto a = adapted_function(solve_model_profile(n, g));
    EXPECT_NEAR(a.leading, 1.0, 1e-8);
    EXPECT_LE(std::abs(a.coefficient - a.expected) / std::abs(a.expected), 1e-5);
    for (std::size_t i = 0; i < a.r.size(); i += 100) EXPECT_GT(a.y[i], 0.0);
  }
}

TEST(AdaptedFunction, RequiresSubcriticalOrder) {
  EXPECT_THROW(adapted_function(solve_model_profile(3, 1.75)), std::invalid_argument);
}

TEST(AdaptedCurvature, PositiveOnInterior) {
  for (auto [n, g] : {std::pair{4, 1.5}, {3, 1.25}, {5, 1.75}, {5, 1.1}}) {
    const auto c = adapted_scalar_curvature(solve_model_profile(n, g));
    EXPECT_GT(c.min_R, 0.0) << n << " " << g;
    EXPECT_LE(c.max_mismatch, 1e-6);
  }
}

TEST(AdaptedCurvature, BoundaryAsymptotics) {
  // J = (2 gamma - 1)/2 W ~ -(2 gamma (2 gamma - 1)/d) Q r^{2 gamma - 2}
  const int n = 4;
  const double g = 1.5;
  const auto c = adapted_scalar_curvature(solve_model_profile(n, g));
  const double lead = -2.0 * g * (2.0 * g - 1.0) / d_gamma(g) * q2gamma_closed(n, g);
  const double J = c.R[9] / (2.0 * n);
  EXPECT_GT(lead, 0.0);
  EXPECT_NEAR(J / (lead * std::pow(c.r[9], 2.0 * g - 2.0)), 1.0, 1e-3);
}

TEST(AdaptedCurvature, HalfOrderIsScalarFlat) {
  const auto c = adapted_scalar_curvature(solve_model_profile(2, 0.5));
  for (double v : c.R) EXPECT_EQ(v, 0.0);
  EXPECT_LE(c.max_mismatch, 1e-6);
}

TEST(ModelScan, RowsMatchPointwise) {
  const auto rows = model_scan(3, 1.1, 1.9, 5);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& row : rows) {
    EXPECT_DOUBLE_EQ(row.q_closed, q2gamma_closed(3, row.gamma));
    if (row.gamma < 1.5) {
      EXPECT_DOUBLE_EQ(row.q_numeric, q2gamma_numeric(solve_model_profile(3, row.gamma)));
      EXPECT_GT(row.min_R, 0.0);
    } else {
      EXPECT_TRUE(std::isnan(row.q_numeric));
    }
  }
  const auto csv = model_scan_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")), "gamma,Q_closed,Q_numeric,rel_err,minR");
}

TEST(ModelScan, SkipsIntegerOrders) {
  const auto rows = model_scan(4, 0.5, 2.5, 5);
  for (const auto& row : rows) EXPECT_NE(row.gamma, std::round(row.gamma));
  EXPECT_EQ(rows.size(), 3u);
}
