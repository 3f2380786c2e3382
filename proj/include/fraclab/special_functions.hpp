#pragma once

#include <gmpxx.h>

#include <span>

#include "fraclab/mesh.hpp"

namespace fraclab {

/// Parameter bundle shared by every route: boundary dimension n, order gamma, and the
/// derived quantities k = floor(gamma), m_k = 2k + 1 - 2 gamma, s = n/2 + gamma and the
/// scattering normalisation d_gamma = 2^{2 gamma} Gamma(gamma) / Gamma(-gamma).
class FracParams {
public:
  /// Scales d_gamma after evaluation; anything other than 1 is a deliberate fault used to
  /// check that the verification suite notices a wrong constant.
  struct Options {
    double d_gamma_scale = 1.0;
  };

  FracParams(int n, double gamma) : FracParams(n, gamma, Options{}) {}
  FracParams(int n, double gamma, Options options);

  int n;
  double gamma;
  int k;
  double m_k;
  double s;
  double d_gamma;

  /// Weight exponent of the second-order extension, 1 - 2 gamma.
  [[nodiscard]] double m0() const noexcept { return 1.0 - 2.0 * gamma; }
};

/// Gamma(x) for x away from the nonpositive integers (reflection formula for x < 0).
double gamma_fn(double x);

/// 2^{2 gamma} Gamma(gamma) / Gamma(-gamma); throws PoleError at integer gamma.
double d_gamma(double gamma);

/// Rising factorial a (a+1) ... (a+k-1), exactly.
mpq_class pochhammer(const mpq_class& a, unsigned k);

/// Gauss series 2F1(a, b; c; x) for 0 <= x < 1, summed to relative tolerance 1e-14.
/// Throws ConvergenceError after 100000 terms; callers should not use it far beyond x = 1/2.
double hyp2f1(double a, double b, double c, double x);

/// Modified Bessel function of the second kind K_nu(x), real nu, x > 0.
double bessel_k(double nu, double x);

/// Normalised decaying profile phi(x) = 2^{1-nu} / Gamma(nu) x^nu K_nu(x), phi(0+) = 1.
double bessel_profile(double nu, double x);

/// d phi / dx = -2^{1-nu} / Gamma(nu) x^nu K_{nu-1}(x).
double bessel_profile_derivative(double nu, double x);

/// phi(lambda y) sampled on `y` together with its y-derivative. Throws std::domain_error
/// when lambda * max(y) > 700.
ModeProfile bessel_k_profile(double nu, double lambda, std::span<const double> y);

}  // namespace fraclab
