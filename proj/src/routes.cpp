#include "fraclab/routes.hpp"

namespace fraclab {

double extension_multiplier(double lambda, const FracParams& params, const ExtensionOptions& opts) {
  if (lambda == 0.0) return 0.0;
  const auto y = graded_mesh(mode_mesh_spec(lambda, opts.points, opts.grading));
  const ModeProfile p = solve_mode_extension(lambda, params.m0(), y, opts.method, opts.far);
  return extract_order_k(p, params, opts.strategy, opts.window);
}

SpectralField extension_apply(const SpectralField& f, const FracParams& params,
                              const ExtensionOptions& opts, Execution exec) {
  return apply_radial_symbol(
      f, [&](double l) { return extension_multiplier(l, params, opts); }, exec);
}

}  // namespace fraclab
