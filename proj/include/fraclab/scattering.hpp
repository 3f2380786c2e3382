#pragma once

#include "fraclab/expansion_fit.hpp"
#include "fraclab/mode_ode.hpp"
#include "fraclab/report.hpp"
#include "fraclab/spectral.hpp"
#include "fraclab/special_functions.hpp"

namespace fraclab {

/// One mode of the Poisson problem -Delta_{g+} u - s(n-s) u = 0 on hyperbolic space in the
/// half-space chart, u = F0 y^{n-s}(1 + ...) + G0 y^s(1 + ...), normalized to F0 = 1.
struct ScatterSolution {
  double lambda = 0.0;
  double s = 0.0;
  int n = 0;
  ModeProfile u;
  double F0 = 1.0;
  double G0 = 0.0;
  double F2 = 0.0;  // y^2 coefficient of F = y^{-(n-s)} (regular part), relative to F0
  double residual = 0.0;
};

struct ScatterOptions {
  SolveMethod method = SolveMethod::SemiAnalytic;
  int points = 4096;
  double grading = 4.0;
  FitWindow window{};
};

/// Solves y^2 u'' - (n-1) y u' - (lambda^2 y^2 - s(n-s)) u = 0 with decay at infinity.
/// SemiAnalytic uses u = y^{n/2} K_gamma(lambda y) up to normalization. FiniteDifference uses a
/// three-point stencil that is exact on y^{n-s}, y^s and y^{n-s+2} at every node, u = y_1^{n-s}
/// at the first node and the outgoing asymptotic ratio y^{n/2} e^{-lambda y} at the last.
/// F0 and G0 come from a two-branch fit; throws FitError if the fit residual exceeds
/// 1e-8 |F0|.
ScatterSolution solve_poisson_mode(double lambda, const FracParams& params,
                                   const ScatterOptions& opts = {});

/// d_gamma G0 / F0 for one mode.
double scattering_multiplier(double lambda, const FracParams& params, const ScatterOptions& opts = {});

/// Per mode, c -> d_gamma (G0/F0) c; the zero mode maps to 0 on the flat model.
SpectralField scattering_apply(const SpectralField& f, const FracParams& params,
                               const ScatterOptions& opts = {},
                               Execution exec = Execution::Parallel);

/// (2 / (n - 2 gamma)) P_{2 gamma}(1) on the flat torus; identically 0.
double q_curvature_flat(const FracParams& params);

/// Fitted y^2 coefficient of F against -lambda^2 / (4 (gamma - 1)); tolerance 1e-4.
VerificationReport f2_consistency(const FracParams& params, double lambda,
                                  const ScatterOptions& opts = {});

}  // namespace fraclab
