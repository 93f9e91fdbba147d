#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvq/patience.hpp"
#include "tvq/smooth_fn.hpp"

namespace tvq {

/// Full model data for the G_t/M/s_t+GI queue and its fluid/Gaussian limits.
struct ModelSpec {
  SmoothFn lambda;                       // arrival rate per unit of scale
  std::optional<SmoothFn> lambda_g;      // sqrt(n) arrival-rate refinement
  SmoothFn staffing;                     // s(t)
  std::optional<SmoothFn> staffing_g;    // sqrt(n) staffing refinement
  double mu = 1.0;                       // service rate
  PatienceDist patience = PatienceDist::exponential(1.0);
  double c_lambda = 1.0;                 // arrival variability; 1 for Poisson
  double horizon = 1.0;                  // T
  double x0 = 0.0;                       // fluid content at t = 0
  double var_x0 = 0.0;                   // Var(X-hat(0))

  [[nodiscard]] bool refined() const { return lambda_g.has_value() || staffing_g.has_value(); }
};

/// Violated assumptions, one human-readable line each; empty when valid.
struct ValidationReport {
  std::vector<std::string> violations;
  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

/// Checks positivity of lambda, s, f and F^c on a grid of step 1e-3*T, plus
/// X(0) <= s(0), mu > 0, c_lambda >= 0, var_x0 >= 0 and T > 0.
ValidationReport validate(const ModelSpec& spec);

/// Throws ModelError carrying the report summary when validation fails.
void require_valid(const ModelSpec& spec);

/// The sinusoidal M_t/M/s+H2 example: lambda = 1 + 0.6 sin t, s = 1, mu = 1,
/// H2 patience with mean 2 and scv 4, T = 16, starting empty.
ModelSpec sinusoidal_h2_example();

}  // namespace tvq
