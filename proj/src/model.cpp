#include "tvq/model.hpp"

#include <cmath>
#include <sstream>

#include "tvq/error.hpp"

namespace tvq {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate(const ModelSpec& spec) {
  ValidationReport r;
  auto fail = [&r](std::string msg) { r.violations.push_back(std::move(msg)); };

  if (!(spec.horizon > 0.0)) {
    fail("horizon T > 0 fails");
    return r;
  }
  if (!(spec.mu > 0.0)) fail("mu > 0 fails");
  if (!(spec.c_lambda >= 0.0)) fail("c_lambda >= 0 fails");
  if (!(spec.var_x0 >= 0.0)) fail("Var(X(0)) >= 0 fails");
  if (!(spec.x0 >= 0.0)) fail("X(0) >= 0 fails");

  const double step = 1e-3 * spec.horizon;
  const int n = 1000;
  double lam_inf = INFINITY, s_inf = INFINITY, f_inf = INFINITY, fc_inf = INFINITY;
  for (int k = 0; k <= n; ++k) {
    const double t = k * step;
    lam_inf = std::min(lam_inf, spec.lambda.value(t));
    s_inf = std::min(s_inf, spec.staffing.value(t));
    f_inf = std::min(f_inf, spec.patience.density(t));
    fc_inf = std::min(fc_inf, spec.patience.survival(t));
  }
  if (!(lam_inf > 0.0)) fail("λ_inf > 0 fails");
  if (!(s_inf > 0.0)) fail("s_inf > 0 fails");
  if (!(f_inf > 0.0)) fail("patience density f > 0 fails");
  if (!(fc_inf > 0.0)) fail("patience survival F^c > 0 fails");
  if (spec.x0 > spec.staffing.value(0.0)) fail("X(0) ≤ s(0) fails");
  return r;
}

void require_valid(const ModelSpec& spec) {
  const auto r = validate(spec);
  if (!r.ok()) throw ModelError(r.summary());
}

ModelSpec sinusoidal_h2_example() {
  ModelSpec m;
  m.lambda = SmoothFn::sinusoid(1.0, 0.6, 1.0, 0.0);
  m.staffing = SmoothFn::constant(1.0);
  m.mu = 1.0;
  m.patience = h2_from_scv(2.0, 4.0);
  m.c_lambda = 1.0;
  m.horizon = 16.0;
  m.x0 = 0.0;
  m.var_x0 = 0.0;
  return m;
}

}  // namespace tvq
