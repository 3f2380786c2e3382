#include "fraclab/scattering.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

std::vector<double> poisson_fd(double lambda, const FracParams& params, const std::vector<double>& y) {
  const double n = params.n, s = params.s;
  const std::size_t N = y.size();
  const double p0 = n - s, p1 = s, p2 = n - s + 2.0;
  // L0 y^p = (p - (n-s)) (p - s) y^p for L0 = y^2 d^2 - (n-1) y d + s(n-s)
  const Eigen::Vector3d target(0.0, 0.0, (p2 - p0) * (p2 - p1));
  std::vector<double> sub(N, 0.0), diag(N, 0.0), super(N, 0.0), rhs(N, 0.0);
  diag[0] = 1.0;
  rhs[0] = std::pow(y[0], p0);
  for (std::size_t i = 1; i + 1 < N; ++i) {
    const double z[3] = {y[i - 1] / y[i], 1.0, y[i + 1] / y[i]};
    Eigen::Matrix3d M;
    for (int c = 0; c < 3; ++c) {
      M(0, c) = std::pow(z[c], p0);
      M(1, c) = std::pow(z[c], p1);
      M(2, c) = std::pow(z[c], p2);
    }
    const Eigen::Vector3d w = M.fullPivLu().solve(target);
    sub[i] = w(0);
    diag[i] = w(1) - lambda * lambda * y[i] * y[i];
    super[i] = w(2);
  }
  const std::size_t last = N - 1;
  sub[last] = -std::pow(y[last] / y[last - 1], 0.5 * n) * std::exp(-lambda * (y[last] - y[last - 1]));
  diag[last] = 1.0;
  // tridiagonal elimination
  for (std::size_t i = 1; i < N; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * super[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> u(N);
  u[last] = rhs[last] / diag[last];
  for (std::size_t i = last; i-- > 0;) u[i] = (rhs[i] - super[i] * u[i + 1]) / diag[i];
  for (double v : u)
    if (!std::isfinite(v)) throw ConvergenceError("solve_poisson_mode: non-finite solution");
  return u;
}

}  // namespace

ScatterSolution solve_poisson_mode(double lambda, const FracParams& params, const ScatterOptions& opts) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("solve_poisson_mode: need lambda >= 0");
  ScatterSolution sol;
  sol.lambda = lambda;
  sol.s = params.s;
  sol.n = params.n;
  const double ns = params.n - params.s;
  const auto y = graded_mesh(mode_mesh_spec(lambda, opts.points, opts.grading));
  sol.u.lambda = lambda;
  sol.u.m = 1.0 - params.n;  // weight of the hyperbolic Laplacian in this chart
  sol.u.y = y;
  sol.u.method = to_string(opts.method);
  sol.u.boundary_value = 1.0;
  if (lambda == 0.0) {
    for (double t : y) sol.u.u.push_back(std::pow(t, ns));
    return sol;
  }
  if (opts.method == SolveMethod::SemiAnalytic) {
    for (double t : y) sol.u.u.push_back(std::pow(t, ns) * bessel_profile(params.gamma, lambda * t));
  } else {
    sol.u.u = poisson_fd(lambda, params, y);
  }
  const auto powers = two_branch_powers(ns, params.s, 6, 6);
  const auto fit = fit_powers(y, sol.u.u, powers, opts.window.lo / lambda, opts.window.hi / lambda);
  sol.F0 = fit.coefficient(ns);
  sol.G0 = fit.coefficient(params.s);
  sol.F2 = fit.coefficient(ns + 2.0) / sol.F0;
  sol.residual = fit.residual;
  if (!(std::abs(sol.F0) > 0.0)) throw FitError("solve_poisson_mode: F0 vanished");
  if (fit.residual > 1e-8 * std::abs(sol.F0)) {
    std::ostringstream os;
    os << "solve_poisson_mode: fit residual " << fit.residual << " exceeds 1e-8 |F0|";
    throw FitError(os.str());
  }
  // normalize F0 = 1
  for (double& v : sol.u.u) v /= sol.F0;
  sol.G0 /= sol.F0;
  sol.residual /= std::abs(sol.F0);
  sol.F0 = 1.0;
  return sol;
}

double scattering_multiplier(double lambda, const FracParams& params, const ScatterOptions& opts) {
  if (lambda == 0.0) return 0.0;
  const ScatterSolution sol = solve_poisson_mode(lambda, params, opts);
  return params.d_gamma * sol.G0 / sol.F0;
}

SpectralField scattering_apply(const SpectralField& f, const FracParams& params,
                               const ScatterOptions& opts, Execution exec) {
  if (!(params.gamma < 0.5 * params.n)) throw std::invalid_argument("scattering_apply: need gamma < n/2");
  return apply_radial_symbol(
      f, [&](double l) { return scattering_multiplier(l, params, opts); }, exec);
}

double q_curvature_flat(const FracParams& params) {
  const SpectralField one = SpectralField::from_function({4, 4}, [](const auto&) { return 1.0; });
  const SpectralField p1 = scattering_apply(one, params, {}, Execution::Serial);
  return 2.0 / (params.n - 2.0 * params.gamma) * p1.values()[0];
}

VerificationReport f2_consistency(const FracParams& params, double lambda, const ScatterOptions& opts) {
  const ScatterSolution sol = solve_poisson_mode(lambda, params, opts);
  const double expected = -lambda * lambda / (4.0 * (params.gamma - 1.0));
  std::ostringstream id;
  id << "f2.gamma" << params.gamma << ".lambda" << lambda;
  const std::string anchor = "second coefficient of F equals -(-Delta f) / (4 (gamma - 1))";
  if (expected == 0.0)
    return make_report_with_error(id.str(), anchor, sol.F2, expected, std::abs(sol.F2), 1e-12, "abs");
  auto r = make_report(id.str(), anchor, sol.F2, expected, 1e-4);
  return r;
}

}  // namespace fraclab
