#include "fraclab/model_geometry.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fraclab/errors.hpp"
#include "fraclab/expansion_fit.hpp"
#include "fraclab/special_functions.hpp"

namespace fraclab {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;  // U, dU/dx

struct HypergeometricSystem {
  HypergeometricParams p;
  void operator()(const State& s, State& ds, double x) const {
    ds[0] = s[1];
    ds[1] = (p.a * p.b * s[0] - (p.c - (p.a + p.b + 1.0) * x) * s[1]) / (x * (1.0 - x));
  }
};

// 2F1 and its x-derivative.
std::pair<double, double> f21(double a, double b, double c, double x) {
  return {hyp2f1(a, b, c, x), a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, x)};
}

void check_model_args(int n, double gamma, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": need n >= 2");
  if (!(gamma > 0.0) || !(gamma < n)) throw std::invalid_argument(std::string(who) + ": need 0 < gamma < n");
  if (std::abs(gamma - std::round(gamma)) <= 1e-9) {
    std::ostringstream os;
    os << who << ": gamma = " << gamma << " is an integer";
    throw PoleError(os.str());
  }
}

// State of `sys` after integrating `s` from x0 to x1, with an observer for intermediate times.
template <class Observer>
void integrate(const HypergeometricSystem& sys, State& s, std::vector<double> times, double tol,
               Observer obs) {
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
  const double dt = (times.back() - times.front()) * 1e-6;
  odeint::integrate_times(stepper, sys, s, times.begin(), times.end(), dt, obs);
}

double five_point_derivative(std::span<const double> f, std::size_t i, double h) {
  // centred fourth-order first derivative
  return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
}

}  // namespace

HypergeometricParams model_hypergeometric_params(int n, double gamma) {
  return {(n - 2.0 * gamma) / (2.0 * n), 0.5, (n - gamma) / n};
}

ModelProfile solve_model_profile(int n, double gamma, const ModelOptions& opts) {
  check_model_args(n, gamma, "solve_model_profile");
  if (std::abs(gamma / n - std::round(gamma / n)) <= 1e-9)
    throw PoleError("solve_model_profile: gamma/n is an integer");
  if (opts.points < 16) throw std::invalid_argument("solve_model_profile: need at least 16 points");
  const auto hp = model_hypergeometric_params(n, gamma);
  const HypergeometricSystem sys{hp};
  const double delta = opts.delta;
  constexpr double xm = 0.5;

  // Branches at x = 0: y1 = 2F1(a, b; c; x), y2 = x^{1-c} 2F1(a-c+1, b-c+1; 2-c; x).
  const double a2 = hp.a - hp.c + 1.0, b2 = hp.b - hp.c + 1.0, c2 = 2.0 - hp.c;
  State y1{}, y2{};
  {
    auto [f, df] = f21(hp.a, hp.b, hp.c, delta);
    y1 = {f, df};
    auto [g, dg] = f21(a2, b2, c2, delta);
    const double e = 1.0 - hp.c;
    y2 = {std::pow(delta, e) * g, e * std::pow(delta, e - 1.0) * g + std::pow(delta, e) * dg};
    integrate(sys, y1, {delta, xm}, opts.tolerance, [](const State&, double) {});
    integrate(sys, y2, {delta, xm}, opts.tolerance, [](const State&, double) {});
  }

  ModelProfile p;
  p.n = n;
  p.gamma = gamma;
  p.r_max = std::exp2(2.0 / n);
  const int N = opts.points;
  const double r_end = p.r_max * std::pow(1.0 - delta, 1.0 / (2.0 * n));
  const double h = r_end / N;
  p.r.resize(N);
  p.U.resize(N);
  p.dU.resize(N);
  for (int j = 0; j < N; ++j) p.r[j] = h * (j + 1);
  auto x_of = [n](double r) { return std::pow(r, 2.0 * n) / 16.0; };

  // Regular solution at x = 1, integrated down to x = 1/2 with grid values recorded.
  std::vector<double> times{1.0 - delta};
  std::vector<int> idx{N - 1};
  for (int j = N - 2; j >= 0; --j) {
    const double x = x_of(p.r[j]);
    if (x <= xm) break;
    times.push_back(x);
    idx.push_back(j);
  }
  times.push_back(xm);
  std::vector<State> recorded;
  recorded.reserve(times.size());
  auto [r0, dr0] = f21(hp.a, hp.b, 1.0, delta);
  State reg{r0, -dr0};
  integrate(sys, reg, times, opts.tolerance,
            [&recorded](const State& s, double) { recorded.push_back(s); });
  if (recorded.size() != times.size())
    throw ConvergenceError("solve_model_profile: integrator skipped output times");

  // reg = alpha y1 + beta y2 at x = 1/2
  const double w = y1[0] * y2[1] - y2[0] * y1[1];
  p.wronskian = w;
  const double scale = std::abs(y1[0] * y2[1]) + std::abs(y2[0] * y1[1]);
  if (!(std::abs(w) > 1e-10 * scale))
    throw ConvergenceError("solve_model_profile: matching-singularity, branch Wronskian degenerates");
  const double alpha = (reg[0] * y2[1] - y2[0] * reg[1]) / w;
  const double beta = (y1[0] * reg[1] - reg[0] * y1[1]) / w;
  if (!(std::abs(alpha) > 0.0)) throw ConvergenceError("solve_model_profile: regular solution has no r^0 term");
  p.B_x = beta / alpha;
  p.B = p.B_x * std::exp2(-4.0 * gamma / n);

  for (std::size_t i = 0; i + 1 < recorded.size(); ++i) {
    const int j = idx[i];
    const double x = times[i];
    p.U[j] = recorded[i][0] / alpha;
    p.dU[j] = recorded[i][1] / alpha * 2.0 * n * x / p.r[j];
  }
  // U = F1(x) + B r^{2 gamma} F2(x) for x <= 1/2.
  const int first_ode = idx.size() > 0 ? idx.back() : N;
  for (int j = 0; j < first_ode; ++j) {
    const double r = p.r[j], x = x_of(r);
    const double xr = 2.0 * n * x / r;
    auto [f, df] = f21(hp.a, hp.b, hp.c, x);
    auto [g, dg] = f21(a2, b2, c2, x);
    const double rg = std::pow(r, 2.0 * gamma);
    p.U[j] = f + p.B * rg * g;
    p.dU[j] = df * xr + p.B * (2.0 * gamma * rg / r * g + rg * dg * xr);
  }
  for (double u : p.U)
    if (!(u > 0.0)) throw ConvergenceError("solve_model_profile: profile is not positive");

  std::vector<double> powers{0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i + j > 0) powers.push_back(2.0 * gamma * i + 2.0 * n * j);
  std::sort(powers.begin(), powers.end());
  const auto fit = fit_powers(p.r, p.U, powers, 0.01 * p.r_max, 0.5 * p.r_max);
  p.A = fit.coefficient(0.0);
  p.fit_residual = fit.residual;
  return p;
}

std::vector<double> model_operator_residual(std::span<const double> r, std::span<const double> U,
                                            std::span<const double> dU,
                                            std::span<const double> d2U, int n, double gamma) {
  if (r.size() != U.size() || r.size() != dU.size() || r.size() != d2U.size())
    throw std::invalid_argument("model_operator_residual: size mismatch");
  const double m0 = 1.0 - 2.0 * gamma;
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double r2n = std::pow(r[i], 2.0 * n);
    out[i] = -d2U[i] - (16.0 * m0 - (m0 + 2.0 * n) * r2n) / (r[i] * (16.0 - r2n)) * dU[i] +
             n * (m0 + n - 1.0) * std::pow(r[i], 2.0 * n - 2.0) / (16.0 - r2n) * U[i];
  }
  return out;
}

double model_residual_sup(const ModelProfile& p, double r_cut_fraction) {
  const double h = p.r[1] - p.r[0];
  std::vector<double> r, U, dU, d2U;
  for (std::size_t i = 2; i + 2 < p.r.size(); ++i) {
    if (p.r[i] > r_cut_fraction * p.r_max) break;
    if (p.r[i] < (1.0 - r_cut_fraction) * p.r_max) continue;
    r.push_back(p.r[i]);
    U.push_back(p.U[i]);
    dU.push_back(p.dU[i]);
    d2U.push_back(five_point_derivative(p.dU, i, h));
  }
  const auto res = model_operator_residual(r, U, dU, d2U, p.n, p.gamma);
  double sup = 0.0;
  for (double v : res) sup = std::max(sup, std::abs(v));
  return sup;
}

double q2gamma_closed(int n, double gamma) {
  check_model_args(n, gamma, "q2gamma_closed");
  if (std::abs(gamma / n - std::round(gamma / n)) <= 1e-9)
    throw PoleError("q2gamma_closed: gamma/n is an integer");
  const double nn = n;
  return std::exp2(2.0 * (nn - 2.0) * gamma / nn) * gamma_fn(gamma) * gamma_fn(-gamma / nn) *
         gamma_fn((nn + 2.0 * gamma) / (2.0 * nn)) /
         (nn * gamma_fn(-gamma) * gamma_fn(gamma / nn) * gamma_fn((3.0 * nn - 2.0 * gamma) / (2.0 * nn)));
}

double q2gamma_numeric(const ModelProfile& p, double d_gamma_scale) {
  return 2.0 / (p.n - 2.0 * p.gamma) * d_gamma(p.gamma) * d_gamma_scale * p.B / p.A;
}

AdaptedFunction adapted_function(const ModelProfile& p) {
  if (!(p.gamma < 0.5 * p.n)) throw std::invalid_argument("adapted_function: need gamma < n/2");
  const double q = 2.0 / (p.n - 2.0 * p.gamma);
  AdaptedFunction a;
  a.r = p.r;
  a.y.resize(p.r.size());
  a.dy.resize(p.r.size());
  std::vector<double> ratio(p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double uq = std::pow(p.U[i], q);
    a.y[i] = p.r[i] * uq;
    a.dy[i] = uq * (1.0 + q * p.r[i] * p.dU[i] / p.U[i]);
    ratio[i] = uq;
  }
  // y/r = 1 + q B r^{2 gamma} + ... with exponents 2 gamma i + 2 n j
  std::vector<double> powers{0.0};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j)
      if (i + j > 0 && 2.0 * p.gamma * i + 2.0 * p.n * j < 8.0 * p.n) powers.push_back(2.0 * p.gamma * i + 2.0 * p.n * j);
  std::sort(powers.begin(), powers.end());
  powers.erase(std::unique(powers.begin(), powers.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-9; }),
               powers.end());
  const auto fit = fit_powers(p.r, ratio, powers, 0.01 * p.r_max, 0.5 * p.r_max);
  a.leading = fit.coefficient(0.0);
  a.coefficient = fit.coefficient(2.0 * p.gamma);
  a.fit_residual = fit.residual;
  a.expected = q2gamma_closed(p.n, p.gamma) / d_gamma(p.gamma);
  if (!(fit.residual <= 1e-9)) {
    std::ostringstream os;
    os << "adapted_function: fit residual " << fit.residual << " exceeds 1e-9";
    throw FitError(os.str());
  }
  return a;
}

CurvatureScan adapted_scalar_curvature(const ModelProfile& p) {
  if (!(p.gamma < 0.5 * p.n)) throw std::invalid_argument("adapted_scalar_curvature: need gamma < n/2");
  const int n = p.n;
  const double gamma = p.gamma, q = 2.0 / (n - 2.0 * gamma), m0 = 1.0 - 2.0 * gamma;
  CurvatureScan out;
  out.min_R = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double r = p.r[i], U = p.U[i], dU = p.dU[i];
    const double r2n = std::pow(r, 2.0 * n);
    // U'' from the model equation
    const double d2U = -(16.0 * m0 - (m0 + 2.0 * n) * r2n) / (r * (16.0 - r2n)) * dU +
                       n * (m0 + n - 1.0) * std::pow(r, 2.0 * n - 2.0) / (16.0 - r2n) * U;
    const double y = r * std::pow(U, q);
    const double L = q * r * dU / U;
    const double R = n * (2.0 * gamma - 1.0) * (-L * (2.0 + L)) / (y * y);

    // w = log y: w' = (1 + L)/r, w'' = -1/r^2 + q (U''/U - (U'/U)^2)
    const double w1 = (1.0 + L) / r;
    const double w2 = -1.0 / (r * r) + q * (d2U / U - (dU / U) * (dU / U));
    // volume density r^{-n-1} a b^{n-1} of g_+
    const double rn = std::pow(r, n), s = 1.0 + rn / 4.0;
    const double dlog_a = (2.0 - n) / n * (n * rn / (4.0 * r)) / s - (n * rn / (4.0 * r)) / (1.0 - rn / 4.0);
    const double dlog_b = 2.0 / n * (n * rn / (4.0 * r)) / s;
    const double dlogV = -(n + 1.0) / r + dlog_a + (n - 1.0) * dlog_b;
    const double lap = r * r * w2 + (2.0 * r + r * r * dlogV) * w1;
    const double Rc = (-n * (n + 1.0) - 2.0 * n * lap - n * (n - 1.0) * r * r * w1 * w1) / (y * y);

    if (i + 1 == p.r.size()) break;  // x = 1 - delta carries the start data only
    out.r.push_back(r);
    out.R.push_back(R);
    out.R_conformal.push_back(Rc);
    out.min_R = std::min(out.min_R, R);
    out.max_mismatch = std::max(out.max_mismatch, std::abs(R - Rc) / std::max(1.0, std::abs(R)));
  }
  return out;
}

std::vector<ModelScanRow> model_scan(int n, double lo, double hi, int steps, const ModelOptions& opts) {
  if (steps < 1) throw std::invalid_argument("model_scan: need steps >= 1");
  std::vector<double> gammas;
  for (int j = 0; j < steps; ++j) {
    const double g = steps == 1 ? lo : lo + (hi - lo) * j / (steps - 1.0);
    if (std::abs(g - std::round(g)) <= 1e-9 || std::abs(g / n - std::round(g / n)) <= 1e-9) continue;
    gammas.push_back(g);
  }
  std::vector<ModelScanRow> rows(gammas.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    try {
      const double g = gammas[j];
      ModelScanRow row{n, g, q2gamma_closed(n, g), std::nan(""), std::nan(""), std::nan("")};
      if (g < 0.5 * n) {
        const auto p = solve_model_profile(n, g, opts);
        row.q_numeric = q2gamma_numeric(p);
        row.rel_err = std::abs(row.q_numeric - row.q_closed) / std::abs(row.q_closed);
        row.min_R = adapted_scalar_curvature(p).min_R;
      }
      rows[j] = row;
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return rows;
}

std::string model_scan_csv(const std::vector<ModelScanRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "gamma,Q_closed,Q_numeric,rel_err,minR\r\n";
  auto field = [&os](double v) {
    if (std::isnan(v))
      os << "";
    else
      os << v;
  };
  for (const auto& row : rows) {
    os << row.gamma << ',';
    field(row.q_closed);
    os << ',';
    field(row.q_numeric);
    os << ',';
    field(row.rel_err);
    os << ',';
    field(row.min_R);
    os << "\r\n";
  }
  return os.str();
}

}  // namespace fraclab
