#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fraclab/routes.hpp"
#include "fraclab/scattering.hpp"

using namespace fraclab;

TEST(PoissonMode, ZeroFrequencyIsPower) {
  const FracParams p(2, 0.5);
  const auto sol = solve_poisson_mode(0.0, p);
  EXPECT_EQ(sol.G0, 0.0);
  for (std::size_t i = 0; i < sol.u.size(); i += 97)
    EXPECT_DOUBLE_EQ(sol.u.u[i], std::pow(sol.u.y[i], p.n - p.s));
}

TEST(PoissonMode, HalfOrderScatteringCoefficient) {
  const FracParams p(2, 0.5);
  for (auto m : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
    ScatterOptions o;
    o.method = m;
    const auto sol = solve_poisson_mode(1.0, p, o);
    EXPECT_NEAR(sol.G0, -1.0, m == SolveMethod::SemiAnalytic ? 1e-12 : 1e-5);
    EXPECT_EQ(sol.F0, 1.0);
  }
}

TEST(PoissonMode, CorrespondsToExtensionProfile) {
  for (auto [n, g] : std::vector<std::pair<int, double>>{{2, 0.3}, {4, 1.5}, {6, 2.5}}) {
    const FracParams p(n, g);
    const auto U = solve_mode_extension(1.0, p.m0(), SolveMethod::SemiAnalytic);
    for (auto m : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
      ScatterOptions o;
      o.method = m;
      const auto sol = solve_poisson_mode(1.0, p, o);
      const double tol = m == SolveMethod::SemiAnalytic ? 1e-10 : 1e-4;
      for (std::size_t i = 0; i < U.size() && U.y[i] <= 0.5 * U.y.back(); ++i)
        ASSERT_NEAR(sol.u.u[i] / std::pow(U.y[i], n - p.s), U.u[i], tol) << n << " " << g << " " << i;
    }
  }
}

TEST(PoissonMode, MultiplierMatchesOracle) {
  for (auto [n, g] : std::vector<std::pair<int, double>>{{2, 0.3}, {2, 0.75}, {4, 1.25}, {4, 1.75}, {6, 2.5}})
    for (double lam : {0.7, 2.0, 5.0}) {
      const FracParams p(n, g);
      const double want = std::pow(lam, 2 * g);
      EXPECT_LE(std::abs(scattering_multiplier(lam, p) / want - 1), 1e-6) << n << " " << g << " " << lam;
      ScatterOptions o;
      o.method = SolveMethod::FiniteDifference;
      EXPECT_LE(std::abs(scattering_multiplier(lam, p, o) / want - 1), 1e-3) << n << " " << g;
    }
}

TEST(PoissonMode, RatioIndependentOfNormalization) {
  const FracParams p(4, 1.25);
  const auto sol = solve_poisson_mode(1.3, p);
  std::vector<double> scaled = sol.u.u;
  for (double& v : scaled) v *= -7.5;
  const auto powers = two_branch_powers(p.n - p.s, p.s, 6, 6);
  const auto fit = fit_powers(sol.u.y, scaled, powers, 1e-3 / 1.3, 0.4 / 1.3);
  EXPECT_NEAR(fit.coefficient(p.s) / fit.coefficient(p.n - p.s), sol.G0 / sol.F0, 1e-10);
}

TEST(ScatteringApply, EigenfunctionAndConstant) {
  const FracParams p(2, 0.5);
  const auto f = SpectralField::from_function({64, 64}, [](const auto& x) { return std::cos(x[0]); });
  const auto g = scattering_apply(f, p);
  for (std::size_t i = 0; i < f.total(); i += 17) EXPECT_NEAR(g.values()[i], f.values()[i], 1e-10);
  const auto c = SpectralField::from_function({16, 16}, [](const auto&) { return 2.0; });
  EXPECT_EQ(scattering_apply(c, p).sup_norm(), 0.0);
  EXPECT_EQ(q_curvature_flat(p), 0.0);
  EXPECT_EQ(q_curvature_flat(FracParams(4, 1.5)), 0.0);
}

TEST(ScatteringApply, SelfAdjointAndParallelBitwise) {
  const FracParams p(4, 1.25);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  auto rnd = [&] {
    SpectralField f({16, 16});
    std::vector<double> v(f.total());
    for (double& x : v) x = d(rng);
    f.set_values(v);
    return f;
  };
  const auto f = rnd(), g = rnd();
  const auto pf = scattering_apply(f, p, {}, Execution::Serial);
  const auto pg = scattering_apply(g, p, {}, Execution::Parallel);
  EXPECT_LE(std::abs(pairing(pf, g) - pairing(f, pg)), 1e-8 * std::abs(pairing(pf, g)));
  EXPECT_EQ(scattering_apply(f, p, {}, Execution::Parallel).values(), pf.values());
}

TEST(F2Consistency, Examples) {
  EXPECT_TRUE(f2_consistency(FracParams(4, 1.5), 1.0).pass);
  const auto r = f2_consistency(FracParams(4, 1.5), 1.0);
  EXPECT_NEAR(r.lhs, -0.5, 1e-8);
  EXPECT_TRUE(f2_consistency(FracParams(2, 0.25), 2.0).pass);
  EXPECT_NEAR(f2_consistency(FracParams(2, 0.25), 2.0).rhs, 4.0 / 3.0, 1e-15);
  EXPECT_TRUE(f2_consistency(FracParams(2, 0.25), 0.0).pass);
}

TEST(ExtensionApply, MatchesOracleAndScattering) {
  const FracParams p(4, 1.5);
  const auto f = SpectralField::from_function({32, 32}, [](const auto& x) {
    return std::cos(x[0]) + 0.5 * std::sin(2 * x[0] - x[1]) + 0.25 * std::cos(3 * x[1]);
  });
  const auto oracle = fractional_multiplier_apply(f, p.gamma);
  const auto ext = extension_apply(f, p);
  const auto sc = scattering_apply(f, p);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < f.total(); ++i) {
    e1 = std::max(e1, std::abs(ext.values()[i] - oracle.values()[i]));
    e2 = std::max(e2, std::abs(sc.values()[i] - oracle.values()[i]));
  }
  EXPECT_LE(e1, 1e-6 * oracle.sup_norm());
  EXPECT_LE(e2, 1e-6 * oracle.sup_norm());
}
