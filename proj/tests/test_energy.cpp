#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fraclab/energy.hpp"
#include "fraclab/scattering.hpp"

using namespace fraclab;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

SpectralField cos1() {
  return SpectralField::from_function({16, 16}, [](const auto& x) { return std::cos(x[0]); });
}
SpectralField two_mode() {
  return SpectralField::from_function(
      {16, 16}, [](const auto& x) { return std::cos(x[0]) + 0.5 * std::sin(2.0 * x[0] + x[1]); });
}
SpectralField constant() {
  return SpectralField::from_function({8, 8}, [](const auto&) { return 3.0; });
}

}  // namespace

TEST(EnergyOrder1, HalfOrderSpotValue) {
  const auto r = energy_order1(cos1(), FracParams(2, 0.5));
  EXPECT_NEAR(r.lhs, 2.0 * kPi2, 1e-12);
  EXPECT_NEAR(r.rhs, 2.0 * kPi2, 1e-6);
  EXPECT_TRUE(r.pass);
}

TEST(EnergyOrder1, TwoModeFieldBothMethods) {
  for (double g : {0.3, 0.5, 0.75})
    for (auto m : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
      EnergyOptions o;
      o.method = m;
      const auto r = energy_order1(two_mode(), FracParams(2, g), o);
      EXPECT_LE(r.rel_err, 1e-3) << g;
      EXPECT_GE(r.rhs, 0.0);
    }
}

TEST(EnergyOrder1, ConstantFieldIsZero) {
  const auto r = energy_order1(constant(), FracParams(2, 0.3));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(EnergyOrder1, StableUnderLargerExtent) {
  for (auto m : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
    EnergyOptions a, b;
    a.method = b.method = m;
    b.extent_scale = 2.0;
    const double ia = mode_dirichlet_integral(1.0, 0.5, 0.0, a);
    const double ib = mode_dirichlet_integral(1.0, 0.5, 0.0, b);
    EXPECT_LE(std::abs(ia - ib), 1e-6);
    if (m == SolveMethod::SemiAnalytic) EXPECT_GE(ib, ia - 1e-13);  // nonnegative integrand
  }
}

TEST(EnergyOrder1, RejectsOrderAboveOne) {
  EXPECT_THROW(energy_order1(cos1(), FracParams(4, 1.5)), std::invalid_argument);
}

TEST(EnergyOrder2, ThreeHalvesSpotValue) {
  // u = (1 + y) e^{-y}, Delta u = -2 e^{-y}, int 4 e^{-2y} = 2
  EXPECT_NEAR(mode_paneitz_integral(1.0, 1.5), 2.0, 1e-10);
  const auto r = energy_order2(cos1(), FracParams(4, 1.5));
  EXPECT_NEAR(r.lhs, 4.0 * kPi2, 1e-10);
  EXPECT_NEAR(r.rhs, 4.0 * kPi2, 1e-8);
}

TEST(EnergyOrder2, TwoModeFieldBothMethods) {
  for (double g : {1.25, 1.5, 1.75})
    for (auto m : {SolveMethod::SemiAnalytic, SolveMethod::FiniteDifference}) {
      EnergyOptions o;
      o.method = m;
      EXPECT_LE(energy_order2(two_mode(), FracParams(4, g), o).rel_err, 1e-3) << g;
    }
}

TEST(EnergyOrder2, ConstantFieldIsZero) {
  const auto r = energy_order2(constant(), FracParams(4, 1.25));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(RenormalizedEnergy, ThreeHalvesSpotValue) {
  const auto r = renormalized_energy(cos1(), FracParams(4, 1.5));
  EXPECT_NEAR(r.lhs, 2.0 * kPi2, 1e-10);
  EXPECT_LE(r.rel_err, 1e-2);
  EXPECT_EQ(r.epsilons.size(), 8u);
}

TEST(RenormalizedEnergy, GenericOrders) {
  for (double g : {1.25, 1.5, 1.75}) {
    const auto r = renormalized_energy(two_mode(), FracParams(4, g));
    EXPECT_LE(r.rel_err, 1e-2) << g;
  }
}

TEST(RenormalizedEnergy, YangFormIsProportional) {
  // gamma = 3/2: eps^{-1} int |grad f|^2 - int_{y > eps} |grad U|^2 y^{-2}, times 2(gamma - 1) = 1
  const auto f = cos1();
  const auto r = renormalized_energy(f, FracParams(4, 1.5));
  const double eps = r.epsilons.back();
  // sum |c|^2 volume over the two modes of cos(x1) is 2 pi^2
  const double yang = dirichlet_energy(f) / eps - 2.0 * kPi2 * mode_dirichlet_integral(1.0, 1.5, eps);
  EXPECT_NEAR(r.brackets.back(), yang, 1e-9 * std::abs(yang));
}

TEST(RenormalizedEnergy, ConstantFieldIsZero) {
  const auto r = renormalized_energy(constant(), FracParams(4, 1.25));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_NEAR(r.rhs, 0.0, 1e-12);
}

TEST(RenormalizedEnergy, ValidatesCutoffs) {
  EXPECT_THROW(renormalized_energy(cos1(), FracParams(4, 1.5), {0.1, 0.05, 0.025}), std::invalid_argument);
  EXPECT_THROW(renormalized_energy(cos1(), FracParams(4, 1.5), {0.1, 0.2, 0.05, 0.01}), std::invalid_argument);
  EnergyOptions o;
  o.method = SolveMethod::FiniteDifference;
  EXPECT_THROW(renormalized_energy(cos1(), FracParams(4, 1.5), {}, o), std::invalid_argument);
}

TEST(Divergence, ExponentMatches) {
  for (double g : {1.25, 1.5, 1.75}) {
    const auto d = divergence_exponent(g);
    EXPECT_LE(d.rel_err, 0.05) << g;
  }
}

TEST(Energy, FaultedConstantBreaksIdentity) {
  FracParams::Options o;
  o.d_gamma_scale = 1.01;
  EXPECT_FALSE(energy_order2(two_mode(), FracParams(4, 1.5, o)).pass);
  EXPECT_FALSE(energy_order1(two_mode(), FracParams(2, 0.5, o)).pass);
}

TEST(Energy, ScatteringRouteSelfAdjoint) {
  const auto f = two_mode();
  const auto g = SpectralField::from_function({16, 16}, [](const auto& x) { return std::sin(x[1]) + std::cos(x[0] - x[1]); });
  const FracParams p(4, 1.5);
  const double a = pairing(f, scattering_apply(g, p));
  const double b = pairing(scattering_apply(f, p), g);
  EXPECT_NEAR(a, b, 1e-8 * std::max(1.0, std::abs(a)));
}

TEST(Energy, JsonHasSortedKeys) {
  const auto j = to_json(energy_order1(cos1(), FracParams(2, 0.5)));
  EXPECT_LT(j.find("\"epsilons\""), j.find("\"lhs\""));
  EXPECT_LT(j.find("\"lhs\""), j.find("\"rhs\""));
}

TEST(Energy, ParallelModeSumIsBitwiseSerial) {
  EnergyOptions s, p;
  s.exec = Execution::Serial;
  p.exec = Execution::Parallel;
  const auto f = two_mode();
  EXPECT_EQ(energy_order2(f, FracParams(4, 1.25), s).rhs, energy_order2(f, FracParams(4, 1.25), p).rhs);
  EXPECT_EQ(energy_order1(f, FracParams(2, 0.3), s).rhs, energy_order1(f, FracParams(2, 0.3), p).rhs);
}
