#include "fraclab/expansion_fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

double PowerFit::coefficient(double power) const {
  for (std::size_t i = 0; i < powers.size(); ++i)
    if (std::abs(powers[i] - power) < 1e-9) return coeffs[i];
  return 0.0;
}

double PowerFit::evaluate(double y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < powers.size(); ++i) s += coeffs[i] * std::pow(y, powers[i]);
  return s;
}

PowerFit fit_powers(std::span<const double> y, std::span<const double> u,
                    std::span<const double> powers, double lo, double hi) {
  if (y.size() != u.size()) throw FitError("fit_powers: size mismatch");
  if (!(lo > 0.0) || !(hi > lo)) throw FitError("fit_powers: bad window");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (y[i] >= lo && y[i] <= hi) idx.push_back(i);
  const auto nb = static_cast<Eigen::Index>(powers.size());
  if (idx.size() < 2 * powers.size()) {
    std::ostringstream os;
    os << "fit_powers: only " << idx.size() << " samples in [" << lo << ", " << hi << "] for "
       << powers.size() << " basis functions";
    throw FitError(os.str());
  }
  Eigen::MatrixXd A(static_cast<Eigen::Index>(idx.size()), nb);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double z = y[idx[r]] / hi;
    for (Eigen::Index c = 0; c < nb; ++c) A(r, c) = std::pow(z, powers[c]);
    rhs(r) = u[idx[r]];
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(rhs);
  PowerFit fit;
  fit.powers.assign(powers.begin(), powers.end());
  fit.coeffs.resize(powers.size());
  for (Eigen::Index c = 0; c < nb; ++c) fit.coeffs[c] = sol(c) / std::pow(hi, powers[c]);
  fit.residual = (A * sol - rhs).cwiseAbs().maxCoeff();
  fit.lo = lo;
  fit.hi = hi;
  fit.samples = idx.size();
  if (!std::isfinite(fit.residual)) throw FitError("fit_powers: non-finite fit");
  return fit;
}

std::vector<double> two_branch_powers(double first, double second, int first_terms,
                                      int second_terms) {
  std::vector<double> p;
  for (int j = 0; j < first_terms; ++j) p.push_back(first + 2.0 * j);
  for (int j = 0; j < second_terms; ++j) p.push_back(second + 2.0 * j);
  return p;
}

std::vector<double> frobenius_powers(double singular, int regular_terms, int singular_terms) {
  return two_branch_powers(0.0, singular, regular_terms, singular_terms);
}

ExpansionFit fit_expansion(const ModeProfile& p, FitWindow window, bool check, double tol) {
  if (!(p.lambda > 0.0)) throw FitError("fit_expansion: needs lambda > 0");
  const auto powers = frobenius_powers(1.0 - p.m);
  ExpansionFit e;
  e.raw = fit_powers(p.y, p.u, powers, window.lo / p.lambda, window.hi / p.lambda);
  e.a = e.raw.coefficient(0.0);
  e.c2 = e.raw.coefficient(2.0);
  e.b = e.raw.coefficient(1.0 - p.m);
  e.residual = e.raw.residual;
  if (check && e.residual > tol * std::abs(e.a)) {
    std::ostringstream os;
    os << "fit_expansion: residual " << e.residual << " exceeds " << tol << " * |a| = "
       << tol * std::abs(e.a);
    throw FitError(os.str());
  }
  return e;
}

}  // namespace fraclab
