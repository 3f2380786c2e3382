#include "fraclab/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin(pi x) without the cancellation of sin(pi * x) near the integers.
double sinpi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  double sign = 1.0;
  if (r >= 1.0) {
    r -= 1.0;
    sign = -1.0;
  }
  if (r > 0.5) r = 1.0 - r;
  return sign * std::sin(kPi * r);
}

// Taylor coefficients of 1/Gamma(1+z) about z = 0.
constexpr std::array<double, 28> kRecipGammaTaylor = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
};

// Temme's auxiliary functions for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),  gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  double odd = 0.0, even = 0.0;
  for (int k = static_cast<int>(kRecipGammaTaylor.size()) - 1; k >= 0; --k) {
    if (k % 2 == 0)
      even = even * mu * mu + kRecipGammaTaylor[k];
    else
      odd = odd * mu * mu + kRecipGammaTaylor[k];
  }
  // 1/Gamma(1+mu) = even + mu*odd, 1/Gamma(1-mu) = even - mu*odd
  return {-odd, even, even + mu * odd, even - mu * odd};
}

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2.
std::pair<double, double> temme_k(double mu, double x) {
  constexpr int kMaxIter = 10000;
  const double mu2 = mu * mu;
  if (x <= 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = kPi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const TemmeGammas g = temme_gammas(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= (i - mu);
      q /= (i + mu);
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw ConvergenceError("bessel_k: series did not converge");
    return {sum, sum1 * 2.0 / x};
  }
  // Steed's continued fraction for the ratio, with Temme's normalisation.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw ConvergenceError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  const double kmu = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  const double kmu1 = kmu * (mu + x + 0.5 - h) / x;
  return {kmu, kmu1};
}

bool is_half_integer(double nu, int& j) {
  const double t = nu - 0.5;
  const double r = std::round(t);
  if (r >= 0.0 && std::abs(t - r) < 1e-15) {
    j = static_cast<int>(r);
    return true;
  }
  return false;
}

// x^{j+1/2} K_{j+1/2}(x) e^{x} / sqrt(pi/2): polynomial closed form.
double half_integer_scaled(int j, double x) {
  double sum = 0.0;
  double coef = 1.0;  // (j+k)! / (k! (j-k)! 2^k)
  for (int k = 0; k <= j; ++k) {
    if (k > 0) coef *= static_cast<double>((j + k) * (j - k + 1)) / (2.0 * k);
    sum += coef * std::pow(x, j - k);
  }
  return sum;
}

}  // namespace

FracParams::FracParams(int n_, double gamma_, Options options) : n(n_), gamma(gamma_) {
  if (n < 1) throw std::invalid_argument("FracParams: n must be a positive integer");
  if (!(gamma > 0.0) || !(gamma < 0.5 * n)) {
    std::ostringstream os;
    os << "FracParams: need 0 < gamma < n/2, got gamma = " << gamma << ", n = " << n;
    throw std::invalid_argument(os.str());
  }
  if (std::abs(gamma - std::round(gamma)) <= 1e-3) {
    std::ostringstream os;
    os << "FracParams: gamma = " << gamma << " is within 1e-3 of an integer";
    throw PoleError(os.str());
  }
  k = static_cast<int>(std::floor(gamma));
  m_k = 2.0 * k + 1.0 - 2.0 * gamma;
  s = 0.5 * n + gamma;
  d_gamma = fraclab::d_gamma(gamma) * options.d_gamma_scale;
}

double gamma_fn(double x) {
  if (x <= 0.0 && std::abs(x - std::round(x)) <= 1e-9) {
    std::ostringstream os;
    os << "gamma_fn: x = " << x << " is at a pole";
    throw PoleError(os.str());
  }
  if (x > 0.0) return std::tgamma(x);
  return kPi / (sinpi(x) * std::tgamma(1.0 - x));
}

double d_gamma(double gamma) {
  if (std::abs(gamma - std::round(gamma)) <= 1e-9)
    throw PoleError("d_gamma: integer gamma is a pole");
  return std::exp2(2.0 * gamma) * gamma_fn(gamma) / gamma_fn(-gamma);
}

mpq_class pochhammer(const mpq_class& a, unsigned k) {
  mpq_class result = 1;
  for (unsigned i = 0; i < k; ++i) result *= a + i;
  return result;
}

double hyp2f1(double a, double b, double c, double x) {
  if (c <= 0.0 && std::abs(c - std::round(c)) < 1e-12)
    throw PoleError("hyp2f1: c is a nonpositive integer");
  if (!(x >= 0.0) || !(x < 1.0)) throw std::domain_error("hyp2f1: need 0 <= x < 1");
  constexpr int kMaxTerms = 100000;
  double term = 1.0, sum = 1.0;
  int small_run = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= 1e-14 * std::abs(sum) * (1.0 - x)) {
      if (++small_run >= 2) return sum;
    } else {
      small_run = 0;
    }
  }
  throw ConvergenceError("hyp2f1: series exceeded 100000 terms");
}

double bessel_k(double nu, double x) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k: need x > 0");
  nu = std::abs(nu);
  int j = 0;
  if (is_half_integer(nu, j))
    return std::sqrt(kPi / 2.0) * std::exp(-x) * half_integer_scaled(j, x) / std::pow(x, nu);
  const int nl = static_cast<int>(nu + 0.5);
  const double mu = nu - nl;
  auto [kmu, kmu1] = temme_k(mu, x);
  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * (2.0 / x) * kmu1 + kmu;
    kmu = kmu1;
    kmu1 = next;
  }
  return kmu;
}

double bessel_profile(double nu, double x) {
  if (!(nu > 0.0)) throw std::domain_error("bessel_profile: need nu > 0");
  if (x == 0.0) return 1.0;
  int j = 0;
  if (is_half_integer(nu, j)) {
    // 2^{1-nu}/Gamma(nu) sqrt(pi/2) = 2^{1-j} j! / (2j)! ... evaluated directly below
    const double norm = std::exp2(1.0 - nu) / gamma_fn(nu) * std::sqrt(kPi / 2.0);
    return norm * std::exp(-x) * half_integer_scaled(j, x);
  }
  return std::exp2(1.0 - nu) / gamma_fn(nu) * std::pow(x, nu) * bessel_k(nu, x);
}

double bessel_profile_derivative(double nu, double x) {
  if (!(nu > 0.0)) throw std::domain_error("bessel_profile_derivative: need nu > 0");
  return -std::exp2(1.0 - nu) / gamma_fn(nu) * std::pow(x, nu) * bessel_k(nu - 1.0, x);
}

ModeProfile bessel_k_profile(double nu, double lambda, std::span<const double> y) {
  if (!(lambda > 0.0)) throw std::domain_error("bessel_k_profile: need lambda > 0");
  if (y.empty() || !(y.front() > 0.0)) throw std::domain_error("bessel_k_profile: need y > 0");
  if (lambda * y.back() > 700.0)
    throw std::domain_error("bessel_k_profile: lambda * y_max exceeds 700");
  ModeProfile p;
  p.lambda = lambda;
  p.m = 1.0 - 2.0 * nu;
  p.y.assign(y.begin(), y.end());
  p.u.resize(y.size());
  p.du.resize(y.size());
  p.method = "semi-analytic";
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double x = lambda * y[i];
    p.u[i] = bessel_profile(nu, x);
    p.du[i] = lambda * bessel_profile_derivative(nu, x);
  }
  return p;
}

}  // namespace fraclab
