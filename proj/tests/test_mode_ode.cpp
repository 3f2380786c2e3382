#include <gtest/gtest.h>

#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/mode_ode.hpp"

using namespace fraclab;

namespace {
const std::vector<double> kGammas = {0.3, 0.5, 0.75, 1.25, 1.5, 1.75, 2.5};

double multiplier(const ModeProfile& p, const FracParams& params) {
  return extract_order_k(p, params);
}
}  // namespace

TEST(Mesh, GradedMeshShape) {
  const auto y = graded_mesh(mode_mesh_spec(2.0));
  ASSERT_EQ(y.size(), 4096u);
  EXPECT_DOUBLE_EQ(y.back(), 20.0);
  EXPECT_LE(y.front(), 1e-4 * y.back());
  for (std::size_t i = 1; i < y.size(); ++i) EXPECT_GT(y[i], y[i - 1]);
  EXPECT_LT(y[1] - y[0], y[2] - y[1]);
}

TEST(Mesh, WeightedTrapezoidExactOnLinearTimesPower) {
  const auto y = graded_mesh({64, 2.0, 3.0});
  for (double p : {-0.6, 0.0, 0.4, -2.0}) {
    std::vector<double> g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = 2.0 - 0.5 * y[i];
    const double lo = y[3];
    auto prim = [&](double t) {
      return 2.0 * std::pow(t, p + 1) / (p + 1) -
             0.5 * (p == -2.0 ? std::log(t) : std::pow(t, p + 2) / (p + 2));
    };
    const double exact = prim(3.0) - prim(lo);
    EXPECT_NEAR(weighted_trapezoid(y, g, p, lo), exact, 1e-12 * std::abs(exact)) << p;
  }
}

TEST(Mesh, MeshDerivativeExactOnQuadratics) {
  const auto y = graded_mesh({50, 3.0, 2.0});
  std::vector<double> f(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) f[i] = 1 + 2 * y[i] - 3 * y[i] * y[i];
  const auto d = mesh_derivative(y, f);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(d[i], 2 - 6 * y[i], 1e-9);
}

TEST(ExpansionFit, RecoversSyntheticCoefficients) {
  const auto y = graded_mesh(mode_mesh_spec(1.0));
  ModeProfile p;
  p.lambda = 1.0;
  p.m = -0.5;  // singular exponent 1.5
  p.y = y;
  for (double t : y) p.u.push_back(2.0 - 0.7 * t * t + 0.3 * std::pow(t, 1.5) + 0.1 * std::pow(t, 3.5));
  const auto e = fit_expansion(p);
  EXPECT_NEAR(e.a, 2.0, 1e-12);
  EXPECT_NEAR(e.c2, -0.7, 1e-10);
  EXPECT_NEAR(e.b, 0.3, 1e-10);
  EXPECT_LE(e.residual, 1e-8 * std::abs(e.a));
}

TEST(ExpansionFit, ThrowsOnEmptyWindow) {
  const std::vector<double> y = {1.0, 2.0, 3.0};
  const std::vector<double> u = {1.0, 1.0, 1.0};
  const std::vector<double> pw = {0.0, 2.0};
  EXPECT_THROW(fit_powers(y, u, pw, 1e-3, 0.4), FitError);
}

TEST(SolveModeExtension, ExponentialForMZero) {
  for (auto method : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
    const auto p = solve_mode_extension(1.0, 0.0, method);
    const double tol = method == SolveMethod::SemiAnalytic ? 1e-12 : 1e-6;
    for (std::size_t i = 0; i < p.size(); i += 37) EXPECT_NEAR(p.u[i], std::exp(-p.y[i]), tol);
    EXPECT_TRUE(p.warnings.empty());
  }
}

TEST(SolveModeExtension, ConstantForZeroFrequency) {
  const auto y = graded_mesh({128, 4.0, 40.0});
  for (double m : {-0.4, 0.0, 0.6}) {
    const auto p = solve_mode_extension(0.0, m, y, SolveMethod::FiniteDifference);
    for (double v : p.u) EXPECT_EQ(v, 1.0);
    EXPECT_EQ(extract_weighted_neumann(p), 0.0);
  }
}

TEST(SolveModeExtension, ThreeHalvesProfile) {
  // nu = 3/2 is weight 1 - 2 nu = -2
  for (auto method : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
    const auto p = solve_mode_extension(1.0, -2.0, method);
    const double tol = method == SolveMethod::SemiAnalytic ? 1e-12 : 1e-6;
    for (std::size_t i = 0; i < p.size(); i += 41)
      EXPECT_NEAR(p.u[i], (1 + p.y[i]) * std::exp(-p.y[i]), tol);
  }
}

TEST(SolveModeExtension, DecaysToTruncation) {
  for (double g : kGammas) {
    const auto p = solve_mode_extension(1.5, 1 - 2 * g, SolveMethod::FiniteDifference);
    EXPECT_LE(std::abs(p.u.back()), 1e-10) << g;
    EXPECT_NEAR(fit_expansion(p).a, 1.0, 1e-12) << g;
  }
}

TEST(SolveModeExtension, MethodsAgreeInSupNorm) {
  for (double g : kGammas) {
    const auto sa = solve_mode_extension(1.0, 1 - 2 * g, SolveMethod::SemiAnalytic);
    const auto fd = solve_mode_extension(1.0, 1 - 2 * g, SolveMethod::FiniteDifference);
    double sup = 0.0;
    for (std::size_t i = 0; i < sa.size() && sa.y[i] <= 0.5 * sa.y.back(); ++i)
      sup = std::max(sup, std::abs(sa.u[i] - fd.u[i]));
    EXPECT_LE(sup, 1e-6) << g;
  }
}

TEST(SolveModeExtension, CoarseMeshWarns) {
  const auto p = solve_mode_extension(1.0, 0.4, SolveMethod::FiniteDifference, 24, 1.0);
  EXPECT_FALSE(p.warnings.empty());
}

TEST(SolveModeExtension, RejectsBadInput) {
  EXPECT_THROW(solve_mode_extension(-1.0, 0.0, SolveMethod::SemiAnalytic), std::invalid_argument);
  EXPECT_THROW(solve_mode_extension(1.0, 1.0, SolveMethod::SemiAnalytic), std::invalid_argument);
}

TEST(ExtractWeightedNeumann, ExponentialGivesMinusOne) {
  const auto p = solve_mode_extension(1.0, 0.0, SolveMethod::SemiAnalytic);
  const double lim = extract_weighted_neumann(p);
  EXPECT_NEAR(lim, -1.0, 1e-10);
  const FracParams params(2, 0.5);
  EXPECT_NEAR(params.d_gamma / (2 * 0.5) * lim, 1.0, 1e-10);
}

TEST(ExtractWeightedNeumann, BesselOracle) {
  for (double g : {0.3, 0.75})
    for (double lam : {0.5, 1.0, 3.0}) {
      const FracParams params(2, g);
      const auto p = solve_mode_extension(lam, params.m0(), SolveMethod::SemiAnalytic);
      const double expected = 2 * g / params.d_gamma * std::pow(lam, 2 * g);
      EXPECT_NEAR(extract_weighted_neumann(p) / expected, 1.0, 1e-8);
    }
}

TEST(ApplyWeightedOperator, HandExamples) {
  const auto p = solve_mode_extension(1.0, -2.0, SolveMethod::SemiAnalytic);
  const auto v = apply_weighted_operator(p, 0.0);
  for (std::size_t i = 0; i < v.size(); i += 53)
    if (v.y[i] > 1e-3) EXPECT_NEAR(v.u[i], -2 * std::exp(-v.y[i]), 1e-6 * (1 + v.y[i]));
  const auto e = solve_mode_extension(1.0, 0.0, SolveMethod::SemiAnalytic);
  const auto z = apply_weighted_operator(e, 0.0);
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z.y[i] > 1e-3) EXPECT_NEAR(z.u[i], 0.0, 1e-5);
  const auto c = solve_mode_extension(0.0, 0.3, SolveMethod::SemiAnalytic);
  for (double x : apply_weighted_operator(c, 0.3).u) EXPECT_EQ(x, 0.0);
}

TEST(ExtractOrderK, ExtractionConstants) {
  EXPECT_NEAR(extraction_constant(FracParams(4, 1.5)), -0.5, 1e-14);
  EXPECT_NEAR(extraction_constant(FracParams(2, 0.5)), -1.0, 1e-14);
  // gamma = 5/2: Gamma(1/2)/Gamma(7/2) * d / 64 = (8/15)(-45/64)
  EXPECT_NEAR(extraction_constant(FracParams(6, 2.5)), -0.375, 1e-13);
}

TEST(ExtractOrderK, OracleEquivalenceOverGammaGrid) {
  for (double g : kGammas)
    for (double lam : {1.0, 2.0}) {
      const FracParams params(6, g);
      const double want = std::pow(lam, 2 * g);
      const auto sa = solve_mode_extension(lam, params.m0(), SolveMethod::SemiAnalytic);
      const auto fd = solve_mode_extension(lam, params.m0(), SolveMethod::FiniteDifference);
      EXPECT_LE(std::abs(multiplier(sa, params) / want - 1), 1e-6) << g << " " << lam;
      EXPECT_LE(std::abs(multiplier(fd, params) / want - 1), 1e-3) << g << " " << lam;
    }
}

TEST(ExtractOrderK, FourthOrderClosedFormChain) {
  const FracParams params(4, 1.5);
  const auto p = solve_mode_extension(1.0, params.m0(), SolveMethod::SemiAnalytic);
  EXPECT_NEAR(extract_order_k(p, params, ExtractionStrategy::Mesh), 1.0, 1e-6);
  EXPECT_NEAR(extract_order_k(p, params, ExtractionStrategy::Series), 1.0, 1e-9);
}

TEST(ExtractOrderK, ZeroFrequencyAndGuards) {
  const FracParams params(4, 1.5);
  const auto c = solve_mode_extension(0.0, params.m0(), SolveMethod::SemiAnalytic);
  EXPECT_EQ(extract_order_k(c, params), 0.0);
  const auto wrong = solve_mode_extension(1.0, 0.0, SolveMethod::SemiAnalytic);
  EXPECT_THROW(extract_order_k(wrong, params), std::invalid_argument);
  const FracParams small_n(3, 1.25);  // k = 1 is within n/2 - margin? 1 < 1.5 ok
  const auto p = solve_mode_extension(1.0, small_n.m0(), SolveMethod::SemiAnalytic);
  EXPECT_NO_THROW(extract_order_k(p, small_n));
}

TEST(ExtractOrderK, SecondCoefficientMatchesF2) {
  for (double g : {0.3, 0.75, 1.25, 1.5, 1.75})
    for (double lam : {1.0, 2.0}) {
      const auto p = solve_mode_extension(lam, 1 - 2 * g, SolveMethod::SemiAnalytic);
      const double want = -lam * lam / (4 * (g - 1));
      EXPECT_LE(std::abs(fit_expansion(p).c2 / want - 1), 1e-4) << g;
    }
  const auto p = solve_mode_extension(1.0, -2.0, SolveMethod::SemiAnalytic);
  EXPECT_NEAR(fit_expansion(p).c2, -0.5, 1e-9);
}

TEST(ExtractOrderK, FiniteDifferenceConverges) {
  for (double g : {0.3, 1.5}) {
    const FracParams params(4, g);
    double prev = 0.0;
    for (int n : {1024, 2048, 4096}) {
      const auto p = solve_mode_extension(1.0, params.m0(), SolveMethod::FiniteDifference, n);
      const double err = std::abs(extract_order_k(p, params) - 1.0);
      if (prev > 0.0) EXPECT_GE(prev / err, 3.0) << g << " N=" << n;
      prev = err;
    }
  }
}

TEST(CheckInduction, Ratios) {
  {
    const FracParams params(2, 0.75);
    const auto p = solve_mode_extension(1.0, params.m0(), SolveMethod::SemiAnalytic);
    EXPECT_TRUE(check_induction(p, params, 1).pass);
  }
  {
    const FracParams params(4, 1.5);
    const auto p = solve_mode_extension(1.0, params.m0(), SolveMethod::SemiAnalytic);
    const auto r = check_induction(p, params, 1);
    EXPECT_TRUE(r.pass) << r.detail;
    EXPECT_NEAR(r.rhs, -2.0 * 1.0, 1e-6);  // -2 * (coefficient of y in -y e^{-y} / y ... ) = -2
  }
  {
    const FracParams params(6, 2.5);
    for (auto method : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
      const auto p = solve_mode_extension(1.0, params.m0(), method);
      const auto r = check_induction(p, params, 2);
      EXPECT_TRUE(r.pass) << r.detail;
    }
  }
}

TEST(ProfileCsv, HasHeaderAndRows) {
  const auto p = solve_mode_extension(1.0, 0.0, SolveMethod::SemiAnalytic, 64);
  const std::string csv = profile_csv(p);
  EXPECT_EQ(csv.substr(0, 13), "y,u,residual\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
}
