#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace tvq::quad {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (nodes by Newton iteration on P_n).
const Rule& gauss_legendre(int n);

/// Composite Gauss-Legendre over [a, b] split into equal panels.
template <class F>
double integrate(F&& f, double a, double b, int panels = 4, int order = 8) {
  if (b == a) return 0.0;
  const Rule& r = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    double acc = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) acc += r.weights[k] * f(mid + half * r.nodes[k]);
    sum += half * acc;
  }
  return sum;
}

/// Cumulative trapezoid on a (possibly non-uniform) grid; out[0] = 0.
std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y);

/// Cubic Hermite interpolation on one cell from values and slopes.
inline double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
         (s3 - s2) * h * d1;
}

/// Derivative of the cubic Hermite cell interpolant.
inline double hermite_slope(double x0, double x1, double y0, double y1, double d0, double d1,
                            double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * h * d0 + (-6 * s2 + 6 * s) * y1 +
          (3 * s2 - 2 * s) * h * d1) /
         h;
}

/// Index i with x[i] <= t < x[i+1], clamped to [0, size-2].
std::size_t locate(std::span<const double> x, double t);

/// Linear interpolation on a sorted grid (clamped at the ends).
double interp_linear(std::span<const double> x, std::span<const double> y, double t);

/// Hermite interpolation on a sorted grid with nodal slopes (extrapolates the
/// end cells).
double interp_hermite(std::span<const double> x, std::span<const double> y,
                      std::span<const double> dy, double t);

}  // namespace tvq::quad
