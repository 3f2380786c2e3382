#include "fraclab/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace fraclab {

std::vector<double> graded_mesh(const MeshSpec& spec) {
  if (spec.points < 4) throw std::invalid_argument("graded_mesh: need at least 4 points");
  if (!(spec.grading >= 1.0)) throw std::invalid_argument("graded_mesh: grading must be >= 1");
  if (!(spec.extent > 0.0)) throw std::invalid_argument("graded_mesh: extent must be positive");
  std::vector<double> y(static_cast<std::size_t>(spec.points));
  const double n = spec.points;
  for (int j = 1; j <= spec.points; ++j) y[j - 1] = spec.extent * std::pow(j / n, spec.grading);
  return y;
}

MeshSpec mode_mesh_spec(double lambda, int points, double grading) {
  MeshSpec spec;
  spec.points = points;
  spec.grading = grading;
  spec.extent = lambda > 0.0 ? 40.0 / lambda : 40.0;
  return spec;
}

double power_integral(double a, double b, double p) {
  if (std::abs(p + 1.0) < 1e-13) return std::log(b / a);
  return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
}

namespace {

// Exact integral of (ga + (gb-ga)(y-a)/(b-a)) y^p over [a, b].
double cell_integral(double a, double b, double ga, double gb, double p) {
  const double i0 = power_integral(a, b, p);
  const double i1 = power_integral(a, b, p + 1.0);
  const double slope = (gb - ga) / (b - a);
  return (ga - slope * a) * i0 + slope * i1;
}

}  // namespace

double weighted_trapezoid(std::span<const double> y, std::span<const double> g, double p,
                          double lower) {
  if (y.size() != g.size() || y.size() < 2)
    throw std::invalid_argument("weighted_trapezoid: size mismatch");
  double total = 0.0;
  std::size_t start = 0;
  if (lower < y[0]) {
    if (lower == 0.0) {
      if (p <= -1.0) throw std::invalid_argument("weighted_trapezoid: weight not integrable at 0");
      total += g[0] * std::pow(y[0], p + 1.0) / (p + 1.0);
    } else {
      total += g[0] * power_integral(lower, y[0], p);
    }
  } else {
    while (start + 1 < y.size() && y[start + 1] <= lower) ++start;
    if (start + 1 == y.size()) return 0.0;
    const double a = y[start], b = y[start + 1];
    const double t = (lower - a) / (b - a);
    const double gl = g[start] + t * (g[start + 1] - g[start]);
    total += cell_integral(lower, b, gl, g[start + 1], p);
    ++start;
  }
  for (std::size_t i = start; i + 1 < y.size(); ++i)
    total += cell_integral(y[i], y[i + 1], g[i], g[i + 1], p);
  return total;
}

std::vector<double> mesh_derivative(std::span<const double> y, std::span<const double> f) {
  const std::size_t n = y.size();
  if (f.size() != n || n < 3) throw std::invalid_argument("mesh_derivative: size mismatch");
  std::vector<double> d(n);
  // derivative at x of the parabola through (x0,f0), (x1,f1), (x2,f2)
  auto lagrange = [](double x, double x0, double x1, double x2, double f0, double f1, double f2) {
    return f0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)) +
           f1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)) +
           f2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  };
  d[0] = lagrange(y[0], y[0], y[1], y[2], f[0], f[1], f[2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = lagrange(y[i], y[i - 1], y[i], y[i + 1], f[i - 1], f[i], f[i + 1]);
  d[n - 1] = lagrange(y[n - 1], y[n - 3], y[n - 2], y[n - 1], f[n - 3], f[n - 2], f[n - 1]);
  return d;
}

std::vector<double> weighted_tail_integrals(std::span<const double> y, std::span<const double> g,
                                            double p) {
  if (y.size() != g.size() || y.size() < 2)
    throw std::invalid_argument("weighted_tail_integrals: size mismatch");
  std::vector<double> tail(y.size(), 0.0);
  for (std::size_t i = y.size() - 1; i-- > 0;)
    tail[i] = tail[i + 1] + cell_integral(y[i], y[i + 1], g[i], g[i + 1], p);
  return tail;
}

}  // namespace fraclab
