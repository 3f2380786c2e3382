#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {
constexpr double kPi = std::numbers::pi;

SpectralField cos_x1(int n = 2, int size = 64) {
  return SpectralField::from_function(std::vector<int>(n, size),
                                      [](const std::vector<double>& x) { return std::cos(x[0]); });
}

SpectralField random_field(std::uint64_t seed, std::vector<int> sizes, int band, bool zero_mean) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  SpectralField f(sizes);
  std::vector<std::complex<double>> c(f.total(), {0.0, 0.0});
  std::vector<int> k;
  for (std::size_t i = 0; i < f.total(); ++i) {
    f.frequency(i, k);
    bool in_band = true;
    for (int v : k) in_band = in_band && std::abs(v) <= band;
    const std::size_t j = f.conjugate_index(i);
    if (!in_band || j < i) continue;
    std::complex<double> z(g(rng), i == j ? 0.0 : g(rng));
    c[i] = z;
    c[j] = std::conj(z);
  }
  if (zero_mean) c[0] = 0.0;
  f.set_coeffs(c);
  f.set_values(f.values());
  return f;
}
}  // namespace

TEST(SpectralField, RoundTripAndHermitian) {
  for (int n : {1, 2, 3}) {
    const auto f = random_field(3 + n, std::vector<int>(n, n == 3 ? 16 : 64), 1 << 20, false);
    SpectralField g = f;
    g.set_coeffs(f.coeffs());
    double err = 0.0;
    for (std::size_t i = 0; i < f.total(); ++i) err = std::max(err, std::abs(g.values()[i] - f.values()[i]));
    EXPECT_LE(err, 1e-12 * f.sup_norm());
    EXPECT_EQ(f.hermitian_defect(), 0.0);
  }
}

TEST(SpectralField, RejectsBadGrids) {
  EXPECT_THROW(SpectralField({48}), std::invalid_argument);
  EXPECT_THROW(SpectralField({8, 8, 8, 8}), std::invalid_argument);
  EXPECT_THROW(SpectralField({8}, {-1.0}), std::invalid_argument);
}

TEST(FractionalMultiplier, Eigenfunctions) {
  const auto f = cos_x1();
  const auto p = fractional_multiplier_apply(f, 0.5);
  for (std::size_t i = 0; i < f.total(); ++i) EXPECT_NEAR(p.values()[i], f.values()[i], 1e-13);
  const auto g = SpectralField::from_function({64, 64}, [](const auto& x) { return std::cos(2 * x[0]); });
  const auto q = fractional_multiplier_apply(g, 0.75);
  for (std::size_t i = 0; i < g.total(); ++i) EXPECT_NEAR(q.values()[i], std::pow(2.0, 1.5) * g.values()[i], 1e-12);
  const auto c = SpectralField::from_function({32, 32}, [](const auto&) { return 3.0; });
  EXPECT_EQ(fractional_multiplier_apply(c, 0.3).sup_norm(), 0.0);
}

TEST(FractionalMultiplier, Semigroup) {
  const auto f = random_field(11, {64, 64}, 1 << 20, true);
  for (auto [a, b] : {std::pair{0.3, 0.45}, {0.5, 1.25}, {1.1, 0.7}}) {
    const auto lhs = fractional_multiplier_apply(fractional_multiplier_apply(f, a), b);
    const auto rhs = fractional_multiplier_apply(f, a + b);
    double err = 0.0;
    for (std::size_t i = 0; i < f.total(); ++i) err = std::max(err, std::abs(lhs.values()[i] - rhs.values()[i]));
    EXPECT_LE(err, 1e-12 * rhs.sup_norm()) << a << "+" << b;
  }
}

TEST(FractionalMultiplier, PreservesHermitianSymmetryExactly) {
  const auto f = random_field(5, {32, 16, 8}, 1 << 20, false);
  for (double g : {0.3, 1.5, 2.5}) EXPECT_EQ(fractional_multiplier_apply(f, g).hermitian_defect(), 0.0);
}

TEST(FractionalMultiplier, SelfAdjoint) {
  const auto f = random_field(1, {64, 64}, 1 << 20, false);
  const auto g = random_field(2, {64, 64}, 1 << 20, false);
  for (double gam : {0.3, 0.75, 1.5}) {
    const double a = pairing(fractional_multiplier_apply(f, gam), g);
    const double b = pairing(f, fractional_multiplier_apply(g, gam));
    EXPECT_LE(std::abs(a - b), 1e-11 * std::abs(a));
  }
}

TEST(Pairing, ValuesAndParseval) {
  const auto c = cos_x1();
  const auto s = SpectralField::from_function({64, 64}, [](const auto& x) { return std::sin(x[0]); });
  EXPECT_NEAR(pairing(c, c), 2 * kPi * kPi, 1e-11);
  EXPECT_NEAR(pairing(c, s), 0.0, 1e-12);
  const auto f = random_field(9, {64, 64}, 1 << 20, false);
  const auto g = random_field(10, {64, 64}, 1 << 20, false);
  EXPECT_LE(std::abs(pairing(f, g) - pairing_direct(f, g)), 1e-10 * std::abs(pairing(f, g)));
  const double gam = 0.6;
  double expected = 0.0;
  for (std::size_t i = 0; i < f.total(); ++i) expected += std::norm(f.coeffs()[i]) * std::pow(f.wavenumber(i), 2 * gam);
  expected *= f.volume();
  EXPECT_NEAR(pairing(f, fractional_multiplier_apply(f, gam)) / expected, 1.0, 1e-12);
  EXPECT_THROW(pairing(f, SpectralField({32, 32})), std::invalid_argument);
}

TEST(DirichletEnergy, Values) {
  EXPECT_NEAR(dirichlet_energy(cos_x1()), 2 * kPi * kPi, 1e-10);
  const auto c = SpectralField::from_function({16, 16}, [](const auto&) { return 1.0; });
  EXPECT_EQ(dirichlet_energy(c), 0.0);
  const auto f = SpectralField::from_function({64, 64}, [](const auto& x) { return std::cos(x[0]) + std::cos(2 * x[1]); });
  EXPECT_NEAR(dirichlet_energy(f), 10 * kPi * kPi, 1e-9);
}

TEST(ModeMap, ParallelMatchesSerialBitwise) {
  const auto f = random_field(4, {64, 64}, 1 << 20, false);
  const auto t = distinct_modes(f);
  auto fn = [](double l) { return std::sin(l) * std::exp(-0.1 * l) + std::pow(l, 1.3); };
  EXPECT_EQ(map_modes(t.lambdas, fn, Execution::Serial), map_modes(t.lambdas, fn, Execution::Parallel));
}

TEST(ModeMap, DistinctModesMergeConjugates) {
  const SpectralField f({8, 8});
  const auto t = distinct_modes(f);
  for (std::size_t i = 0; i < f.total(); ++i) EXPECT_EQ(t.mode_slot[i], t.mode_slot[f.conjugate_index(i)]);
  EXPECT_EQ(t.lambdas.front(), 0.0);
  // |(3,4)| == |(5,0)| is not on an 8-grid; |(1,2)| == |(2,1)| is
  EXPECT_LT(t.lambdas.size(), f.total());
}

TEST(ModeMap, PropagatesExceptions) {
  const std::vector<double> l = {1.0, 2.0, 3.0};
  auto bad = [](double x) -> double {
    if (x > 1.5) throw std::runtime_error("boom");
    return x;
  };
  EXPECT_THROW(map_modes(l, bad, Execution::Parallel), std::runtime_error);
}

TEST(Csv, RoundTrip) {
  const auto f = random_field(8, {8, 4}, 1 << 20, false);
  std::stringstream ss;
  write_csv(ss, f);
  const auto g = read_csv(ss);
  EXPECT_EQ(g.sizes(), f.sizes());
  EXPECT_EQ(g.values(), f.values());
}

TEST(Csv, QuotingRules) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  std::stringstream ss("\"i0\",value\r\n0,\"1.5\"\n1,2\n");
  const auto f = read_csv(ss);
  EXPECT_EQ(f.values(), (std::vector<double>{1.5, 2.0}));
  bool ok = false;
  std::stringstream q("\"x,\"\"y\"\"\",z\n");
  EXPECT_EQ(parse_csv_record(q, ok), (std::vector<std::string>{"x,\"y\"", "z"}));
}

TEST(Csv, RejectsMalformed) {
  std::stringstream missing("i0,i1,value\n0,0,1\n1,1,3\n");
  EXPECT_THROW(read_csv(missing), std::runtime_error);
  std::stringstream junk("i0,value\n0,abc\n1,2\n");
  EXPECT_THROW(read_csv(junk), std::runtime_error);
  std::stringstream header("x,y\n");
  EXPECT_THROW(read_csv(header), std::runtime_error);
}
