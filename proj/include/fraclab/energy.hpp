#pragma once

#include <string>
#include <vector>

#include "fraclab/mode_ode.hpp"
#include "fraclab/special_functions.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

/// lhs is the boundary side (a constant times <f, P f> by the Fourier route), rhs the
/// interior integral (or its extrapolated renormalized limit).
struct EnergyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;  // |lhs - rhs| / max(|lhs|, 1e-30)
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> epsilons;
  std::vector<double> brackets;   // renormalized case: bracket value at each epsilon
  double remainder_coeff = 0.0;   // renormalized case: c1 of c0 + c1 eps^{4 - 2 gamma}
  double fit_residual = 0.0;      // renormalized case: max |fit - bracket|
  std::vector<std::string> warnings;
};

/// Interior quadrature controls. SemiAnalytic integrates the closed profile by composite
/// Gauss-Legendre over the cells of a graded mesh; FiniteDifference integrates the discrete
/// profile with the exact power weight per cell.
struct EnergyOptions {
  SolveMethod method = SolveMethod::SemiAnalytic;
  int points = 4096;         // FD nodes
  int cells = 512;           // Gauss cells
  double grading = 4.0;
  double extent_scale = 1.0; // Y = extent_scale * 40 / lambda
  Execution exec = Execution::Parallel;
};

/// Per-mode interior integrals at frequency lambda > 0 (profile with u(0) = 1).
/// int_lower^Y (u'^2 + lambda^2 u^2) y^{m0}
double mode_dirichlet_integral(double lambda, double gamma, double lower, const EnergyOptions& opts = {});
/// int_0^Y (u'' + (m1/y) u' - lambda^2 u)^2 y^{m1}, m1 = 3 - 2 gamma
double mode_paneitz_integral(double lambda, double gamma, const EnergyOptions& opts = {});

/// -(2 gamma / d) <f, P f> against the weighted Dirichlet energy of the extension; gamma in (0, 1).
EnergyReport energy_order1(const SpectralField& f, const FracParams& params,
                           const EnergyOptions& opts = {}, double tol = 1e-3);

/// (8 gamma (gamma - 1) / d) <f, P f> against int (Delta_{phi_1} U)^2 y^{m1}; gamma in (1, 2).
EnergyReport energy_order2(const SpectralField& f, const FracParams& params,
                           const EnergyOptions& opts = {}, double tol = 1e-3);

/// (4 gamma (gamma - 1) / d) <f, P f> against the limit as eps -> 0 of
/// eps^{2 - 2 gamma} int |grad f|^2 - 2 (gamma - 1) int_{y > eps} |grad U|^2 y^{m0},
/// extrapolated by least squares in c0 + c1 eps^{4 - 2 gamma}. Semi-analytic profiles only.
EnergyReport renormalized_energy(const SpectralField& f, const FracParams& params,
                                 std::vector<double> eps_list = {}, const EnergyOptions& opts = {},
                                 double tol = 1e-2);

/// {2^-3, ..., 2^-10}
std::vector<double> default_epsilons();

/// Log-log slope of D(eps) = I(eps) - I(2 eps) for the raw order-1 integral of one mode,
/// which behaves like eps^{2 - 2 gamma} when gamma > 1.
struct DivergenceFit {
  double exponent = 0.0;
  double expected = 0.0;
  double rel_err = 0.0;
  std::vector<double> epsilons;
  std::vector<double> integrals;
};
DivergenceFit divergence_exponent(double gamma, double lambda = 1.0, std::vector<double> eps_list = {});

std::string to_json(const EnergyReport& r);

}  // namespace fraclab
