#include "tvq/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tvq::quad {

namespace {

Rule build_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("Gauss-Legendre order must be in [1, 64]");
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
  return out;
}

std::size_t locate(std::span<const double> x, double t) {
  if (x.size() < 2) return 0;
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

double interp_linear(std::span<const double> x, std::span<const double> y, double t) {
  if (x.size() == 1) return y[0];
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const std::size_t i = locate(x, t);
  const double s = (t - x[i]) / (x[i + 1] - x[i]);
  return y[i] + s * (y[i + 1] - y[i]);
}

double interp_hermite(std::span<const double> x, std::span<const double> y,
                      std::span<const double> dy, double t) {
  if (x.size() == 1) return y[0] + dy[0] * (t - x[0]);
  const std::size_t i = locate(x, t);
  return hermite(x[i], x[i + 1], y[i], y[i + 1], dy[i], dy[i + 1], t);
}

}  // namespace tvq::quad
