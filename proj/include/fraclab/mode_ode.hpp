#pragma once

#include <span>
#include <string>
#include <vector>

#include "fraclab/expansion_fit.hpp"
#include "fraclab/mesh.hpp"
#include "fraclab/report.hpp"
#include "fraclab/special_functions.hpp"

namespace fraclab {

enum class SolveMethod { SemiAnalytic, FiniteDifference };
enum class FarBoundary { Robin, Dirichlet };

SolveMethod parse_solve_method(const std::string& s);
std::string to_string(SolveMethod m);

/// Decaying solution of u'' + (m/y) u' - lambda^2 u = 0 with u(0+) = 1, for any m < 1.
///
/// SemiAnalytic samples the Bessel profile with nu = (1-m)/2. FiniteDifference solves the
/// conservative form (y^m u')' = lambda^2 y^m u by finite volumes with u = 1 at y_1 and a Robin
/// (or Dirichlet) condition at y_N, then rescales by the fitted constant term so that the
/// limit at y = 0 is 1. The FD path also evaluates the Bessel profile and records a warning
/// if the two differ by more than 1e-3 on [y_1, Y/2].
ModeProfile solve_mode_extension(double lambda, double m, std::span<const double> y,
                                 SolveMethod method, FarBoundary far = FarBoundary::Robin);

/// Convenience overload on the default graded mesh for this lambda.
ModeProfile solve_mode_extension(double lambda, double m, SolveMethod method,
                                 int points = 4096, double grading = 4.0);

/// lim_{y->0} y^m du/dy = (1-m) b from the windowed expansion fit; 0 for lambda = 0.
double extract_weighted_neumann(const ModeProfile& p, FitWindow window = {});

/// u'' + (m_op/y) u' - lambda^2 u on the interior nodes y_2..y_{N-1}. Uses the stored
/// derivative when present and differentiates it once more on the mesh. The result is
/// tagged with weight m+2 so that fit_expansion picks the shifted exponent 1-(m+2).
ModeProfile apply_weighted_operator(const ModeProfile& p, double m_op);

enum class ExtractionStrategy {
  Auto,    // series; the mesh chain loses digits to repeated differencing
  Mesh,    // repeated apply_weighted_operator, then a fit
  Series,  // fit u once, apply the operators exactly to the fitted generalized powers
};

ExtractionStrategy parse_strategy(const std::string& s);

/// Gamma(gamma-k)/Gamma(gamma+1) (-1)^k d_gamma / (2^{2k+1} k!); k = 0 gives d_gamma/(2 gamma).
double extraction_constant(const FracParams& params);

/// P_{2 gamma} multiplier value for this mode: the composition of second-order factors with
/// weights m_k - 2k + 4j - 2 (j = 1 applied first), the limit of y^{m_k} d/dy of the result,
/// and the extraction constant. `p` is the Bessel profile of order gamma (weight 1 - 2 gamma).
/// k = 0 reduces to (d_gamma / 2 gamma) lim y^{m_0} u'.
double extract_order_k(const ModeProfile& p, const FracParams& params,
                       ExtractionStrategy strategy = ExtractionStrategy::Auto,
                       FitWindow window = {});

/// Compares the y^{2gamma-2k} coefficient of L_{2k}^{m_k} u with (-2)^k k! times the same
/// coefficient of (y^{-1} d/dy)^k u. Tolerance 1e-4 (1e-3 for k >= 2).
VerificationReport check_induction(const ModeProfile& p, const FracParams& params, int k,
                                   FitWindow window = {});

/// CSV (y, u, residual) with the residual of u'' + (m/y) u' - lambda^2 u.
std::string profile_csv(const ModeProfile& p);

}  // namespace fraclab
