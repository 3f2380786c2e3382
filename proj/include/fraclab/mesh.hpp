#pragma once

#include <span>
#include <string>
#include <vector>

namespace fraclab {

/// Points y_j = Y (j/N)^p, j = 1..N, clustered toward y = 0.
struct MeshSpec {
  int points = 4096;
  double grading = 4.0;
  double extent = 40.0;  // Y
};

std::vector<double> graded_mesh(const MeshSpec& spec);

/// Default extent Y = 40/lambda for lambda > 0, so that lambda*Y = 40 for every mode.
MeshSpec mode_mesh_spec(double lambda, int points = 4096, double grading = 4.0);

/// Radial profile of one Fourier mode of frequency magnitude lambda.
/// `du` holds du/dy at the same nodes.
struct ModeProfile {
  double lambda = 0.0;
  double m = 0.0;
  std::vector<double> y;
  std::vector<double> u;
  std::vector<double> du;
  double boundary_value = 1.0;
  std::string method;
  std::vector<std::string> warnings;

  [[nodiscard]] std::size_t size() const noexcept { return y.size(); }
};

/// Exact integral of y^p over [a, b], 0 < a < b (logarithm when p = -1).
double power_integral(double a, double b, double p);

/// Integral of g(y) y^p over [lower, y_back] with g interpolated linearly between nodes and
/// the power weight integrated exactly on each cell. When lower < y_front the first node's
/// value is extended down to `lower`. Requires p > -1 if lower == 0.
double weighted_trapezoid(std::span<const double> y, std::span<const double> g, double p,
                          double lower = 0.0);

/// df/dy at every node by three-point Lagrange differences on the nonuniform mesh
/// (one-sided at the ends). Second order.
std::vector<double> mesh_derivative(std::span<const double> y, std::span<const double> f);

/// Same as weighted_trapezoid but returns the tail integrals over [y_i, y_back] for each node.
std::vector<double> weighted_tail_integrals(std::span<const double> y, std::span<const double> g,
                                            double p);

}  // namespace fraclab
