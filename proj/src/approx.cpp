#include "tvq/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "tvq/csv.hpp"

namespace tvq {

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// First and second moments of (Y - a)^+ for Y ~ N(m, sd^2).
std::pair<double, double> positive_part(double m, double sd, double a) {
  const double d = (m - a) / sd;
  const double pdf = normal_pdf(d), cdf = normal_cdf(d);
  const double e1 = sd * (pdf + d * cdf);
  const double e2 = sd * sd * ((1 + d * d) * cdf + d * pdf);
  return {e1, e2};
}

}  // namespace

TruncatedMoments truncated_moments(double mean, double var, double a) {
  TruncatedMoments r;
  if (!(var > 0.0)) {
    r.mean_pos = std::max(mean - a, 0.0);
    r.mean_min = std::min(mean, a);
    return r;
  }
  const double sd = std::sqrt(var);
  const auto [p1, p2] = positive_part(mean, sd, a);
  r.mean_pos = p1;
  r.var_pos = std::max(0.0, p2 - p1 * p1);
  // Y ^ a = a - (a - Y)^+, and a - Y ~ N(a - m, var).
  const auto [n1, n2] = positive_part(a - mean, sd, 0.0);
  r.mean_min = a - n1;
  r.var_min = std::max(0.0, n2 - n1 * n1);
  return r;
}

GaussianLaw gaussian_X(double n, const FluidSolution& fluid, const GaussianSolution& g,
                       std::size_t k) {
  return {n * fluid.X.at(k), n * g.var_X.at(k)};
}

PerformanceReport report(double n, const FluidSolution& fluid, const GaussianSolution& g) {
  PerformanceReport r;
  r.n = n;
  r.t = fluid.t;
  const std::size_t N = fluid.size();
  for (auto* v : {&r.staff, &r.mean_X, &r.var_X, &r.mean_Q, &r.var_Q, &r.mean_B, &r.var_B,
                  &r.mean_W, &r.var_W, &r.mean_V, &r.var_V, &r.abandonment_rate}) {
    v->resize(N);
  }
  r.wait_limit.resize(N);
  for (std::size_t k = 0; k < N; ++k) {
    const auto law = gaussian_X(n, fluid, g, k);
    const double staff = std::ceil(n * fluid.spec.staffing.value(fluid.t[k]) - 1e-9);
    const auto tm = truncated_moments(law.mean, law.var, staff);
    r.staff[k] = staff;
    r.mean_X[k] = law.mean;
    r.var_X[k] = law.var;
    r.mean_Q[k] = tm.mean_pos;
    r.var_Q[k] = tm.var_pos;
    r.mean_B[k] = tm.mean_min;
    r.var_B[k] = tm.var_min;
    const bool ol = fluid.regime[k] == Regime::Overloaded;
    r.wait_limit[k] = ol;
    r.mean_W[k] = fluid.w[k];
    r.mean_V[k] = fluid.v[k];
    r.var_W[k] = ol ? g.var_W[k] / n : 0.0;
    r.var_V[k] = ol ? g.var_V[k] / n : 0.0;
    r.abandonment_rate[k] = n * fluid.alpha[k];
  }
  return r;
}

void write_report_csv(const PerformanceReport& r, std::ostream& os) {
  CsvWriter csv(os, {"t", "mean_X", "var_X", "mean_Q", "var_Q", "mean_B", "var_B", "mean_W",
                     "var_W", "mean_V", "var_V"});
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    for (double v : {r.t[k], r.mean_X[k], r.var_X[k], r.mean_Q[k], r.var_Q[k], r.mean_B[k],
                     r.var_B[k], r.mean_W[k], r.var_W[k], r.mean_V[k], r.var_V[k]}) {
      csv.cell(v);
    }
    csv.end_row();
  }
}

}  // namespace tvq
