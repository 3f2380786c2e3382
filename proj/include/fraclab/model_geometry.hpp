#pragma once

#include <span>
#include <string>
#include <vector>

#include "fraclab/report.hpp"

namespace fraclab {

/// The homogeneous Poincare-Einstein model on R^2 x F^{n-1} (F Ricci flat) in the chart
/// r in (0, r_max), r_max = 2^{2/n}, with x = r^{2n}/16. The radial extension equation for
/// weight m0 = 1 - 2 gamma is the hypergeometric equation with
/// a = (n - 2 gamma)/(2n), b = 1/2, c = (n - gamma)/n (so c - a - b = 0 and x = 1 is the
/// logarithmic case).
struct HypergeometricParams {
  double a, b, c;
};
HypergeometricParams model_hypergeometric_params(int n, double gamma);

/// U(r) = 1 + B r^{2 gamma} + ..., regular at x = 1. `U`, `dU` sampled on `r`.
struct ModelProfile {
  int n = 0;
  double gamma = 0.0;
  double r_max = 0.0;
  std::vector<double> r;
  std::vector<double> U;
  std::vector<double> dU;
  double A = 1.0;  // fitted r^0 coefficient after normalization
  double B = 0.0;  // r^{2 gamma} coefficient (B_x 2^{-4 gamma / n})
  double B_x = 0.0;
  double wronskian = 0.0;
  double fit_residual = 0.0;
};

struct ModelOptions {
  int points = 2000;
  double delta = 1e-6;      // Frobenius start offsets from x = 0 and x = 1
  double tolerance = 1e-12; // abs and rel tolerance of the adaptive integrator
};

/// Double shooting: the solution regular at x = 1 (series 2F1(a, b; 1; 1 - x) started at
/// x = 1 - delta) and the two Frobenius branches at x = 0 (started at x = delta) are
/// integrated to x = 1/2 and matched there. Values on the uniform grid r_j = j h up to
/// r_max (1 - delta)^{1/(2n)} use the series for x <= 1/2 and the integrated regular
/// solution beyond. Throws PoleError for integer gamma or gamma/n, ConvergenceError when the
/// branch Wronskian degenerates.
ModelProfile solve_model_profile(int n, double gamma, const ModelOptions& opts = {});

/// -U'' - (16 m0 - (m0 + 2n) r^{2n}) / (r (16 - r^{2n})) U' + n (m0 + n - 1) r^{2n-2} / (16 - r^{2n}) U
std::vector<double> model_operator_residual(std::span<const double> r, std::span<const double> U,
                                            std::span<const double> dU,
                                            std::span<const double> d2U, int n, double gamma);

/// Residual of the operator above with U'' obtained by fourth-order differences of dU on the
/// uniform grid (interior points only); returns max |residual| over r <= r_cut.
double model_residual_sup(const ModelProfile& p, double r_cut_fraction = 0.9);

/// Closed-form Q_{2 gamma} of the model boundary.
double q2gamma_closed(int n, double gamma);
/// (2/(n - 2 gamma)) d_gamma B / A from the numerical profile. `d_gamma_scale` multiplies
/// d_gamma (fault injection only).
double q2gamma_numeric(const ModelProfile& p, double d_gamma_scale = 1.0);

/// y(r) = r U^{2/(n - 2 gamma)} on the profile grid together with the fitted r^{1+2 gamma}
/// coefficient. Requires gamma < n/2.
struct AdaptedFunction {
  std::vector<double> r, y, dy;
  double leading = 1.0;      // fitted coefficient of r
  double coefficient = 0.0;  // fitted coefficient of r^{1 + 2 gamma}
  double expected = 0.0;     // Q_{2 gamma} / d_gamma from the closed form
  double fit_residual = 0.0;
};
AdaptedFunction adapted_function(const ModelProfile& p);

/// Scalar curvature n (2 gamma - 1)(y^{-2} - |d y^{-1}|^2_{g+}) of y^2 g_+ and the same
/// quantity from the conformal change formula R = y^{-2}(-n(n+1) - 2n Delta w - n(n-1)|dw|^2),
/// w = log y, on the interior grid.
struct CurvatureScan {
  std::vector<double> r;
  std::vector<double> R;
  std::vector<double> R_conformal;
  double min_R = 0.0;
  double max_mismatch = 0.0;  // max |R - R_conformal| / max(1, |R|)
};
CurvatureScan adapted_scalar_curvature(const ModelProfile& p);

struct ModelScanRow {
  int n;
  double gamma;
  double q_closed;
  double q_numeric;  // NaN when not computed (gamma >= n/2)
  double rel_err;
  double min_R;      // NaN when not computed
};
/// Rows for gamma = lo + (hi - lo) j / (steps - 1), skipping integer gamma. The numeric route
/// and the curvature are evaluated only for gamma < n/2.
std::vector<ModelScanRow> model_scan(int n, double lo, double hi, int steps,
                                     const ModelOptions& opts = {});
std::string model_scan_csv(const std::vector<ModelScanRow>& rows);

}  // namespace fraclab
