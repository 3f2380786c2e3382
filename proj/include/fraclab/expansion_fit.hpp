#pragma once

#include <span>
#include <vector>

#include "fraclab/mesh.hpp"

namespace fraclab {

/// Least-squares fit of samples to sum_i c_i y^{p_i} on lo <= y <= hi.
struct PowerFit {
  std::vector<double> powers;
  std::vector<double> coeffs;
  double residual = 0.0;  // max |fit - data| over the window
  double lo = 0.0, hi = 0.0;
  std::size_t samples = 0;

  /// Coefficient of y^power (matched to 1e-9); 0 if the power is not in the basis.
  [[nodiscard]] double coefficient(double power) const;
  [[nodiscard]] double evaluate(double y) const;
};

/// Columns are scaled by hi^{p_i} before a column-pivoted QR solve. Throws FitError when the
/// window holds fewer samples than twice the basis size.
PowerFit fit_powers(std::span<const double> y, std::span<const double> u,
                    std::span<const double> powers, double lo, double hi);

/// {0, 2, ..., 2(regular-1)} followed by {singular, singular+2, ...}.
std::vector<double> frobenius_powers(double singular, int regular_terms = 6,
                                     int singular_terms = 4);
/// {first, first+2, ...} followed by {second, second+2, ...}.
std::vector<double> two_branch_powers(double first, double second, int first_terms,
                                      int second_terms);

/// Default window in the scaled variable lambda*y.
struct FitWindow {
  double lo = 1e-3;
  double hi = 0.4;
};

/// Expansion u = a + c2 y^2 + ... + b y^{1-m} + ... of an extension profile.
struct ExpansionFit {
  double a = 0.0;
  double c2 = 0.0;
  double b = 0.0;
  double residual = 0.0;
  PowerFit raw;
};

/// Fits the profile in the window [lo/lambda, hi/lambda] with the Frobenius basis of the
/// exponent pair {0, 1-m}. With `check` set, throws FitError if residual > tol * |a|.
ExpansionFit fit_expansion(const ModeProfile& p, FitWindow window = {}, bool check = true,
                           double tol = 1e-8);

}  // namespace fraclab
