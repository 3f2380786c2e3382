#include "fraclab/energy.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "fraclab/errors.hpp"
#include "fraclab/mesh.hpp"

namespace fraclab {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 10>;

// phi(x) = c x^nu K_nu(x) and its first two derivatives, c = 2^{1-nu}/Gamma(nu).
struct ProfileJet {
  double u, du, d2u;
};
ProfileJet profile_jet(double nu, double lambda, double y) {
  const double x = lambda * y;
  const double c = std::exp2(1.0 - nu) / gamma_fn(nu);
  const double xn = std::pow(x, nu);
  const double k1 = bessel_k(nu - 1.0, x);
  // (x^nu K_{nu-1})' = x^{nu-1} K_{nu-1} - x^nu K_{nu-2}
  return {c * xn * bessel_k(nu, x), -lambda * c * xn * k1,
          -lambda * lambda * c * (xn / x * k1 - xn * bessel_k(nu - 2.0, x))};
}

// Integral of fn over [lower, Y] by 10-point Gauss-Legendre on each cell of the graded mesh.
template <class F>
double graded_gauss(F&& fn, double lambda, double lower, const EnergyOptions& opts) {
  MeshSpec spec = mode_mesh_spec(lambda, opts.cells, opts.grading);
  spec.extent *= opts.extent_scale;
  const auto y = graded_mesh(spec);
  double sum = 0.0;
  double a = lower;
  for (double b : y) {
    if (b <= a) continue;
    sum += Gauss::integrate(fn, a, b);
    a = b;
  }
  return sum;
}

std::vector<double> fd_mesh(double lambda, const EnergyOptions& opts) {
  MeshSpec spec = mode_mesh_spec(lambda, opts.points, opts.grading);
  spec.extent *= opts.extent_scale;
  return graded_mesh(spec);
}

double mode_sum(const SpectralField& f, const std::function<double(double)>& per_mode, Execution exec) {
  const auto table = distinct_modes(f);
  const auto values = map_modes(table.lambdas, per_mode, exec);
  // fixed summation order over flat indices
  double sum = 0.0;
  const auto& c = f.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) sum += std::norm(c[i]) * values[table.mode_slot[i]];
  return sum * f.volume();
}

double energy_pairing(const SpectralField& f, double gamma) {
  return pairing(f, fractional_multiplier_apply(f, gamma));
}

void finish(EnergyReport& r, double tol) {
  r.rel_err = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-30);
  r.tolerance = tol;
  r.pass = r.rel_err <= tol;
}

}  // namespace

double mode_dirichlet_integral(double lambda, double gamma, double lower, const EnergyOptions& opts) {
  if (lambda == 0.0) return 0.0;
  const double m0 = 1.0 - 2.0 * gamma;
  if (opts.method == SolveMethod::SemiAnalytic) {
    auto fn = [&](double y) {
      const auto j = profile_jet(gamma, lambda, y);
      return (j.du * j.du + lambda * lambda * j.u * j.u) * std::pow(y, m0);
    };
    return graded_gauss(fn, lambda, lower, opts);
  }
  if (lower != 0.0) throw std::invalid_argument("mode_dirichlet_integral: finite-difference route needs lower = 0");
  const auto y = fd_mesh(lambda, opts);
  const auto p = solve_mode_extension(lambda, m0, y, SolveMethod::FiniteDifference);
  // y^{m0} u'^2 = (y^{m0} u')^2 y^{-m0}: the flux is bounded at y = 0
  std::vector<double> flux2(y.size()), u2(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double fl = std::pow(y[i], m0) * p.du[i];
    flux2[i] = fl * fl;
    u2[i] = lambda * lambda * p.u[i] * p.u[i];
  }
  return weighted_trapezoid(y, flux2, -m0) + weighted_trapezoid(y, u2, m0);
}

double mode_paneitz_integral(double lambda, double gamma, const EnergyOptions& opts) {
  if (lambda == 0.0) return 0.0;
  const double m1 = 3.0 - 2.0 * gamma;
  if (opts.method == SolveMethod::SemiAnalytic) {
    auto fn = [&](double y) {
      const auto j = profile_jet(gamma, lambda, y);
      const double L = j.d2u + m1 / y * j.du - lambda * lambda * j.u;
      return L * L * std::pow(y, m1);
    };
    return graded_gauss(fn, lambda, 0.0, opts);
  }
  const auto y = fd_mesh(lambda, opts);
  const auto p = solve_mode_extension(lambda, 1.0 - 2.0 * gamma, y, SolveMethod::FiniteDifference);
  const auto L = apply_weighted_operator(p, m1);
  std::vector<double> sq(L.u.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = L.u[i] * L.u[i];
  return weighted_trapezoid(L.y, sq, m1);
}

EnergyReport energy_order1(const SpectralField& f, const FracParams& params, const EnergyOptions& opts,
                           double tol) {
  if (!(params.gamma < 1.0)) throw std::invalid_argument("energy_order1: need gamma in (0, 1)");
  EnergyReport r;
  r.lhs = -2.0 * params.gamma / params.d_gamma * energy_pairing(f, params.gamma);
  r.rhs = mode_sum(f, [&](double lam) { return mode_dirichlet_integral(lam, params.gamma, 0.0, opts); },
                   opts.exec);
  finish(r, tol);
  return r;
}

EnergyReport energy_order2(const SpectralField& f, const FracParams& params, const EnergyOptions& opts,
                           double tol) {
  if (!(params.gamma > 1.0 && params.gamma < 2.0))
    throw std::invalid_argument("energy_order2: need gamma in (1, 2)");
  EnergyReport r;
  r.lhs = 8.0 * params.gamma * (params.gamma - 1.0) / params.d_gamma * energy_pairing(f, params.gamma);
  r.rhs = mode_sum(f, [&](double lam) { return mode_paneitz_integral(lam, params.gamma, opts); }, opts.exec);
  finish(r, tol);
  return r;
}

std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int j = 3; j <= 10; ++j) eps.push_back(std::exp2(-j));
  return eps;
}

EnergyReport renormalized_energy(const SpectralField& f, const FracParams& params, std::vector<double> eps_list,
                                 const EnergyOptions& opts, double tol) {
  const double g = params.gamma;
  if (!(g > 1.0 && g < 2.0)) throw std::invalid_argument("renormalized_energy: need gamma in (1, 2)");
  if (opts.method != SolveMethod::SemiAnalytic)
    throw std::invalid_argument("renormalized_energy: only the semi-analytic profile is supported");
  if (eps_list.empty()) eps_list = default_epsilons();
  if (eps_list.size() < 4) throw std::invalid_argument("renormalized_energy: need at least 4 cutoffs");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]) || !(eps_list[i] > 0.0))
      throw std::invalid_argument("renormalized_energy: cutoffs must be positive and decreasing");

  EnergyReport r;
  r.epsilons = eps_list;
  r.lhs = 4.0 * g * (g - 1.0) / params.d_gamma * energy_pairing(f, g);
  const double grad = dirichlet_energy(f);
  for (double eps : eps_list) {
    const double interior =
        mode_sum(f, [&](double lam) { return mode_dirichlet_integral(lam, g, eps, opts); }, opts.exec);
    r.brackets.push_back(std::pow(eps, 2.0 - 2.0 * g) * grad - 2.0 * (g - 1.0) * interior);
  }
  const auto k = static_cast<Eigen::Index>(eps_list.size());
  Eigen::MatrixXd A(k, 2);
  Eigen::VectorXd b(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::pow(eps_list[i], 4.0 - 2.0 * g);
    b(i) = r.brackets[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  r.rhs = c(0);
  r.remainder_coeff = c(1);
  r.fit_residual = (A * c - b).cwiseAbs().maxCoeff();
  const double c1_size = std::abs(c(1)) * A.col(1).cwiseAbs().maxCoeff();
  if (r.fit_residual > 0.1 * c1_size && r.fit_residual > 1e-12 * std::max(1.0, std::abs(c(0))))
    r.warnings.push_back("extrapolation-instability: fit residual exceeds 10% of the remainder term");
  finish(r, tol);
  return r;
}

DivergenceFit divergence_exponent(double gamma, double lambda, std::vector<double> eps_list) {
  if (!(gamma > 1.0 && gamma < 2.0)) throw std::invalid_argument("divergence_exponent: need gamma in (1, 2)");
  if (eps_list.empty())
    for (int j = 8; j <= 16; ++j) eps_list.push_back(std::exp2(-j));
  DivergenceFit out;
  out.expected = 2.0 - 2.0 * gamma;
  out.epsilons = eps_list;
  for (double e : eps_list) out.integrals.push_back(mode_dirichlet_integral(lambda, gamma, e));
  // D(eps) = I(eps) - I(2 eps) cancels the finite part
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (double e : eps_list) {
    const double d = mode_dirichlet_integral(lambda, gamma, e) - mode_dirichlet_integral(lambda, gamma, 2.0 * e);
    if (!(d > 0.0)) throw ConvergenceError("divergence_exponent: integral is not increasing");
    const double x = std::log(e), y = std::log(d);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  out.exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  out.rel_err = std::abs(out.exponent - out.expected) / std::abs(out.expected);
  return out;
}

std::string to_json(const EnergyReport& r) {
  nlohmann::json j = {{"lhs", r.lhs},           {"rhs", r.rhs},
                      {"rel_err", r.rel_err},   {"tolerance", r.tolerance},
                      {"pass", r.pass},         {"epsilons", r.epsilons},
                      {"brackets", r.brackets}, {"remainder_coeff", r.remainder_coeff},
                      {"fit_residual", r.fit_residual}, {"warnings", r.warnings}};
  return j.dump(2);
}

}  // namespace fraclab
