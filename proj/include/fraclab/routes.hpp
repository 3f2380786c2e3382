#pragma once

#include "fraclab/mode_ode.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

struct ExtensionOptions {
  SolveMethod method = SolveMethod::SemiAnalytic;
  int points = 4096;
  double grading = 4.0;
  FarBoundary far = FarBoundary::Robin;
  ExtractionStrategy strategy = ExtractionStrategy::Auto;
  FitWindow window{};
};

/// P_{2 gamma} multiplier at frequency lambda through the weighted extension problem.
double extension_multiplier(double lambda, const FracParams& params, const ExtensionOptions& opts = {});

/// Applies P_{2 gamma} mode by mode through the extension route, one solve per distinct |xi|.
SpectralField extension_apply(const SpectralField& f, const FracParams& params,
                              const ExtensionOptions& opts = {},
                              Execution exec = Execution::Parallel);

}  // namespace fraclab
