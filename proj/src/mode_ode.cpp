#include "fraclab/mode_ode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "fraclab/errors.hpp"

namespace fraclab {

SolveMethod parse_solve_method(const std::string& s) {
  if (s == "semi-analytic") return SolveMethod::SemiAnalytic;
  if (s == "finite-difference" || s == "fd") return SolveMethod::FiniteDifference;
  throw std::invalid_argument("unknown solve method '" + s + "'");
}

std::string to_string(SolveMethod m) {
  return m == SolveMethod::SemiAnalytic ? "semi-analytic" : "finite-difference";
}

ExtractionStrategy parse_strategy(const std::string& s) {
  if (s == "auto") return ExtractionStrategy::Auto;
  if (s == "mesh") return ExtractionStrategy::Mesh;
  if (s == "series") return ExtractionStrategy::Series;
  throw std::invalid_argument("unknown extraction strategy '" + s + "'");
}

namespace {

// Tridiagonal solve; sub[0] and super[n-1] are ignored.
std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag,
                           std::vector<double> super, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw ConvergenceError("tridiagonal solve: zero pivot");
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * super[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
  for (double v : x)
    if (!std::isfinite(v)) throw ConvergenceError("tridiagonal solve: non-finite solution");
  return x;
}

ModeProfile constant_profile(double m, std::span<const double> y, std::string method) {
  ModeProfile p;
  p.lambda = 0.0;
  p.m = m;
  p.y.assign(y.begin(), y.end());
  p.u.assign(y.size(), 1.0);
  p.du.assign(y.size(), 0.0);
  p.method = std::move(method);
  return p;
}

ModeProfile finite_difference_profile(double lambda, double m, std::span<const double> y,
                                      FarBoundary far) {
  const std::size_t n = y.size();
  std::vector<double> mid(n - 1), flux(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    mid[i] = 0.5 * (y[i] + y[i + 1]);
    // exact for y^m u' constant across the cell
    flux[i] = 1.0 / power_integral(y[i], y[i + 1], -m);
  }
  const double l2 = lambda * lambda;
  std::vector<double> sub(n, 0.0), diag(n, 0.0), super(n, 0.0), rhs(n, 0.0);
  diag[0] = 1.0;
  rhs[0] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double vol = power_integral(mid[i - 1], mid[i], m);
    sub[i] = -flux[i - 1];
    super[i] = -flux[i];
    diag[i] = flux[i - 1] + flux[i] + l2 * vol;
  }
  const std::size_t last = n - 1;
  if (far == FarBoundary::Robin) {
    // half cell; outgoing flux y^m u' = -lambda y^m u
    const double vol = power_integral(mid[last - 1], y[last], m);
    sub[last] = -flux[last - 1];
    diag[last] = flux[last - 1] + l2 * vol + lambda * std::pow(y[last], m);
  } else {
    diag[last] = 1.0;
  }
  ModeProfile p;
  p.lambda = lambda;
  p.m = m;
  p.y.assign(y.begin(), y.end());
  p.u = thomas(std::move(sub), std::move(diag), std::move(super), std::move(rhs));
  p.method = "finite-difference";
  // The decaying solution space is one-dimensional, so rescaling to a unit limit at y = 0
  // yields the normalized profile.
  double a = 1.0;
  try {
    a = fit_powers(p.y, p.u, frobenius_powers(1.0 - m), 1e-3 / lambda, 0.4 / lambda).coefficient(0.0);
  } catch (const FitError&) {
    p.warnings.push_back("fit window too sparse; profile normalized by its value at y_1");
  }
  if (!(std::abs(a) > 0.0)) throw FitError("finite-difference profile: vanishing boundary limit");
  for (double& v : p.u) v /= a;
  p.du = mesh_derivative(p.y, p.u);
  return p;
}

// F_i = -int_{y_i}^{y_N} f, with the per-cell Hermite end correction (fourth order).
std::vector<double> minus_tail_integral(const std::vector<double>& y, const std::vector<double>& f,
                                        const std::vector<double>& df) {
  std::vector<double> out(y.size(), 0.0);
  for (std::size_t i = y.size() - 1; i-- > 0;) {
    const double h = y[i + 1] - y[i];
    const double cell = 0.5 * h * (f[i] + f[i + 1]) + h * h / 12.0 * (df[i] - df[i + 1]);
    out[i] = out[i + 1] - cell;
  }
  return out;
}

// For m < -1 the y^{1-m} term sits under many regular terms and is lost to the
// discretization error. Instead solve at m' = m + 2j in (-1, 1) and integrate j times:
// if (y^{-1} d/dy) V = W and V decays, then V(y) = -int_y^inf t W(t) dt.
ModeProfile finite_difference_lifted(double lambda, double m, std::span<const double> y,
                                     FarBoundary far) {
  int lifts = 0;
  double base = m;
  while (base <= -1.0) {
    base += 2.0;
    ++lifts;
  }
  if (lifts == 0) return finite_difference_profile(lambda, m, y, far);
  if (std::abs(base + 1.0) < 1e-9)
    throw std::invalid_argument("finite-difference profile: integer Bessel order");
  ModeProfile w = finite_difference_profile(lambda, base, y, far);
  std::vector<double> v = w.u, dv = w.du;
  for (int j = 0; j < lifts; ++j) {
    std::vector<double> f(y.size()), df(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      f[i] = y[i] * v[i];
      df[i] = v[i] + y[i] * dv[i];
    }
    dv = f;  // V' = y W
    v = minus_tail_integral(w.y, f, df);
  }
  const auto fit = fit_powers(w.y, v, frobenius_powers(1.0 - m), 1e-3 / lambda, 0.4 / lambda);
  const double a = fit.coefficient(0.0);
  if (!(std::abs(a) > 0.0)) throw FitError("finite-difference profile: vanishing boundary limit");
  ModeProfile p;
  p.lambda = lambda;
  p.m = m;
  p.y = std::move(w.y);
  p.u = std::move(v);
  p.du = std::move(dv);
  for (double& x : p.u) x /= a;
  for (double& x : p.du) x /= a;
  p.method = "finite-difference";
  return p;
}

}  // namespace

ModeProfile solve_mode_extension(double lambda, double m, std::span<const double> y,
                                 SolveMethod method, FarBoundary far) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("solve_mode_extension: need lambda >= 0");
  if (!(m < 1.0)) throw std::invalid_argument("solve_mode_extension: need m < 1");
  if (y.size() < 8 || !(y.front() > 0.0))
    throw std::invalid_argument("solve_mode_extension: need a positive mesh with >= 8 points");
  for (std::size_t i = 1; i < y.size(); ++i)
    if (!(y[i] > y[i - 1])) throw std::invalid_argument("solve_mode_extension: mesh not increasing");
  if (lambda == 0.0) return constant_profile(m, y, to_string(method));
  const double nu = 0.5 * (1.0 - m);
  if (method == SolveMethod::SemiAnalytic) return bessel_k_profile(nu, lambda, y);

  ModeProfile p = finite_difference_lifted(lambda, m, y, far);
  if (lambda * y.back() <= 700.0) {
    const ModeProfile ref = bessel_k_profile(nu, lambda, y);
    double diff = 0.0;
    const double half = 0.5 * y.back();
    for (std::size_t i = 0; i < y.size() && y[i] <= half; ++i)
      diff = std::max(diff, std::abs(p.u[i] - ref.u[i]));
    if (diff > 1e-3) {
      std::ostringstream os;
      os << "mesh too coarse: finite-difference and semi-analytic profiles differ by " << diff;
      p.warnings.push_back(os.str());
    }
  }
  return p;
}

ModeProfile solve_mode_extension(double lambda, double m, SolveMethod method, int points,
                                 double grading) {
  const auto y = graded_mesh(mode_mesh_spec(lambda, points, grading));
  return solve_mode_extension(lambda, m, y, method);
}

double extract_weighted_neumann(const ModeProfile& p, FitWindow window) {
  if (p.lambda == 0.0) return 0.0;
  const ExpansionFit e = fit_expansion(p, window);
  return (1.0 - p.m) * e.b;
}

ModeProfile apply_weighted_operator(const ModeProfile& p, double m_op) {
  const std::size_t n = p.size();
  if (n < 5) throw std::invalid_argument("apply_weighted_operator: need >= 5 nodes");
  const std::vector<double> du = p.du.size() == n ? p.du : mesh_derivative(p.y, p.u);
  const std::vector<double> d2u = mesh_derivative(p.y, du);
  ModeProfile out;
  out.lambda = p.lambda;
  out.m = p.m + 2.0;
  out.method = p.method;
  out.boundary_value = 0.0;
  const double l2 = p.lambda * p.lambda;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.y.push_back(p.y[i]);
    out.u.push_back(d2u[i] + m_op / p.y[i] * du[i] - l2 * p.u[i]);
  }
  out.du = mesh_derivative(out.y, out.u);
  return out;
}

double extraction_constant(const FracParams& params) {
  const int k = params.k;
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return gamma_fn(params.gamma - k) / gamma_fn(params.gamma + 1.0) * sign * params.d_gamma /
         (std::exp2(2.0 * k + 1.0) * fact);
}

namespace {

using Series = std::map<double, double>;

void add_term(Series& s, double power, double coef) {
  auto it = s.lower_bound(power - 1e-9);
  if (it != s.end() && std::abs(it->first - power) <= 1e-9)
    it->second += coef;
  else
    s.emplace(power, coef);
}

// u'' + (m/y) u' - lambda^2 u applied term by term to sum c y^p.
Series apply_series(const Series& s, double m, double lambda) {
  Series out;
  for (const auto& [p, c] : s) {
    if (std::abs(p) > 1e-12) add_term(out, p - 2.0, c * p * (p - 1.0 + m));
    add_term(out, p, -lambda * lambda * c);
  }
  return out;
}

double series_coefficient(const Series& s, double power) {
  auto it = s.lower_bound(power - 1e-9);
  return (it != s.end() && std::abs(it->first - power) <= 1e-9) ? it->second : 0.0;
}

double shifted_weight(const FracParams& params, int k, int j) {
  return params.m_k - 2.0 * k + 4.0 * j - 2.0;
}

void require_order_profile(const ModeProfile& p, const FracParams& params, const char* who) {
  if (std::abs(p.m - params.m0()) > 1e-12) {
    std::ostringstream os;
    os << who << ": profile weight " << p.m << " is not 1 - 2 gamma = " << params.m0();
    throw std::invalid_argument(os.str());
  }
}

// Coefficient of y^{2 gamma - 2k} of the Delta-composition (without the (-1)^k of L).
double composed_coefficient(const ModeProfile& p, const FracParams& params, int k,
                            ExtractionStrategy strategy, FitWindow window) {
  const double target = 2.0 * params.gamma - 2.0 * k;
  if (strategy == ExtractionStrategy::Auto)
    strategy = ExtractionStrategy::Series;
  if (strategy == ExtractionStrategy::Series) {
    const ExpansionFit e = fit_expansion(p, window);
    Series s;
    for (std::size_t i = 0; i < e.raw.powers.size(); ++i) add_term(s, e.raw.powers[i], e.raw.coeffs[i]);
    for (int j = 1; j <= k; ++j) s = apply_series(s, shifted_weight(params, k, j), p.lambda);
    return series_coefficient(s, target);
  }
  ModeProfile v = p;
  for (int j = 1; j <= k; ++j) v = apply_weighted_operator(v, shifted_weight(params, k, j));
  const auto fit = fit_powers(v.y, v.u, frobenius_powers(target), window.lo / p.lambda,
                              window.hi / p.lambda);
  return fit.coefficient(target);
}

}  // namespace

double extract_order_k(const ModeProfile& p, const FracParams& params,
                       ExtractionStrategy strategy, FitWindow window) {
  if (p.lambda == 0.0) return 0.0;
  require_order_profile(p, params, "extract_order_k");
  const int k = params.k;
  if (k == 0) return extraction_constant(params) * extract_weighted_neumann(p, window);
  if (k >= 0.5 * params.n - 1e-3) throw std::invalid_argument("extract_order_k: need k < n/2");
  const double coef = composed_coefficient(p, params, k, strategy, window);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  // lim y^{m_k} d/dy (c y^{2gamma-2k}) = (2 gamma - 2k) c, since m_k + 2 gamma - 2k - 1 = 0
  return extraction_constant(params) * sign * (2.0 * params.gamma - 2.0 * k) * coef;
}

VerificationReport check_induction(const ModeProfile& p, const FracParams& params, int k,
                                   FitWindow window) {
  if (k < 1) throw std::invalid_argument("check_induction: need k >= 1");
  require_order_profile(p, params, "check_induction");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("check_induction: need lambda > 0");
  if (2.0 * k > 2.0 * params.gamma + 1.0)
    throw std::invalid_argument("check_induction: need 2k - 2 gamma < 1");
  const double target = 2.0 * params.gamma - 2.0 * k;
  // m_k for this k, which may differ from params.k
  const double mk = 2.0 * k + 1.0 - 2.0 * params.gamma;
  auto weight = [&](int j) { return mk - 2.0 * k + 4.0 * j - 2.0; };

  double lhs;
  if (k == 1) {
    ModeProfile v = apply_weighted_operator(p, weight(1));
    lhs = -fit_powers(v.y, v.u, frobenius_powers(target), window.lo / p.lambda, window.hi / p.lambda)
               .coefficient(target);
  } else {
    const ExpansionFit e = fit_expansion(p, window);
    Series s;
    for (std::size_t i = 0; i < e.raw.powers.size(); ++i) add_term(s, e.raw.powers[i], e.raw.coeffs[i]);
    for (int j = 1; j <= k; ++j) s = apply_series(s, weight(j), p.lambda);
    lhs = ((k % 2 == 0) ? 1.0 : -1.0) * series_coefficient(s, target);
  }

  // (y^{-1} d/dy)^k u: analytic for the Bessel profile, repeated mesh differences otherwise
  std::vector<double> w(p.size());
  const double nu = params.gamma;
  if (p.method == "semi-analytic") {
    const double c = std::exp2(1.0 - nu) / gamma_fn(nu) * std::pow(p.lambda, 2.0 * k) *
                     ((k % 2 == 0) ? 1.0 : -1.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x = p.lambda * p.y[i];
      w[i] = c * std::pow(x, nu - k) * bessel_k(nu - k, x);
    }
  } else {
    w = p.u;
    for (int j = 0; j < k; ++j) {
      w = j == 0 && p.du.size() == p.size() ? p.du : mesh_derivative(p.y, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] /= p.y[i];
    }
  }
  const double rhs_coef =
      fit_powers(p.y, w, frobenius_powers(target), window.lo / p.lambda, window.hi / p.lambda)
          .coefficient(target);
  double scale = 1.0;
  for (int i = 1; i <= k; ++i) scale *= -2.0 * i;
  const double rhs = scale * rhs_coef;
  std::ostringstream id;
  id << "induction.k" << k << ".gamma" << params.gamma;
  auto r = make_report(id.str(),
                       "leading singular coefficient of L_2k equals (-2)^k k! (y^-1 d/dy)^k",
                       lhs, rhs, k >= 2 ? 1e-3 : 1e-4);
  std::ostringstream d;
  d << "ratio " << lhs / rhs;
  r.detail = d.str();
  return r;
}

std::string profile_csv(const ModeProfile& p) {
  std::ostringstream os;
  os.precision(17);
  os << "y,u,residual\n";
  const std::vector<double> du = p.du.size() == p.size() ? p.du : mesh_derivative(p.y, p.u);
  const std::vector<double> d2u = mesh_derivative(p.y, du);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double res = d2u[i] + p.m / p.y[i] * du[i] - p.lambda * p.lambda * p.u[i];
    os << p.y[i] << "," << p.u[i] << "," << res << "\n";
  }
  return os.str();
}

}  // namespace fraclab
