#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tvq/fluid.hpp"
#include "tvq/gaussian.hpp"

namespace tvq {

/// Moments of (Y - a)^+ and Y ^ a for Y ~ N(m, var).
struct TruncatedMoments {
  double mean_pos = 0, var_pos = 0;  // (Y - a)^+
  double mean_min = 0, var_min = 0;  // min(Y, a)
};

/// With var <= 0 the law is a point mass at m.
TruncatedMoments truncated_moments(double mean, double var, double a);

struct GaussianLaw {
  double mean = 0, var = 0;
};

/// (n X(t), n Var X-hat(t)) at grid index k.
GaussianLaw gaussian_X(double n, const FluidSolution& fluid, const GaussianSolution& g,
                       std::size_t k);

/// Finite-n predictions on the fluid grid. Waiting-time rows in UL intervals
/// carry the fluid value 0 with variance 0 and `wait_limit` false.
struct PerformanceReport {
  double n = 1;
  std::vector<double> t, staff;  // staff = ceil(n s(t))
  std::vector<double> mean_X, var_X, mean_Q, var_Q, mean_B, var_B;
  std::vector<double> mean_W, var_W, mean_V, var_V;
  std::vector<double> abandonment_rate;
  std::vector<bool> wait_limit;
};

PerformanceReport report(double n, const FluidSolution& fluid, const GaussianSolution& g);

/// CSV: t, mean_X, var_X, mean_Q, var_Q, mean_B, var_B, mean_W, var_W, mean_V, var_V.
void write_report_csv(const PerformanceReport& r, std::ostream& os);

}  // namespace tvq
