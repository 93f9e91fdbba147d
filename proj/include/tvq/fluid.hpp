#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tvq/model.hpp"

namespace tvq {

enum class Regime { Underloaded, Overloaded };

const char* regime_label(Regime r);

/// One maximal UL or OL interval of the fluid model.
///
/// Nodes are the global grid points inside the interval plus the exact
/// switching times at either end, so the first and last steps may be shorter
/// than the grid step. An overloaded interval still open at the horizon is
/// integrated past T (nodes with t > T) until t - w(t) reaches T, which is
/// what the potential waiting time needs near the horizon.
struct FluidInterval {
  Regime regime = Regime::Underloaded;
  double start = 0.0;
  double end = 0.0;           // switching time, or the horizon T
  bool closed_by_switch = false;
  double x_start = 0.0;       // X(start)

  std::vector<double> t;      // node times
  std::vector<long> grid;     // global grid index of each node, -1 if off-grid
  std::vector<double> y;      // X (UL) or w (OL)
  std::vector<double> dy;     // dX/dt (UL) or dw/dt (OL)
  std::vector<double> cum_a;  // A(t)
  std::vector<double> cum_d;  // D(t)
  std::vector<double> cum_lambda;  // Lambda(t)
  std::vector<double> cum_s;       // S(t) = int_0^t s
  std::vector<double> lmap;        // L(t) = t - w(t) (OL only)

  /// Number of leading nodes with t <= T.
  std::size_t horizon_nodes = 0;

  [[nodiscard]] bool overloaded() const { return regime == Regime::Overloaded; }
  [[nodiscard]] bool contains(double time) const { return time >= start && time <= t.back(); }

  /// Dense leading component (X in UL, w in OL), cubic Hermite through the
  /// RK4 nodes with the ODE right-hand side as slopes.
  [[nodiscard]] double y_at(double time) const;
  /// Inverse of L(u) = u - w(u) (OL only); nullopt outside the computed range.
  [[nodiscard]] std::optional<double> l_inverse(double u) const;
};

/// Deterministic fluid solution on the uniform grid t_k = k * step over [0, T].
class FluidSolution {
 public:
  ModelSpec spec;
  double step = 1e-3;
  std::vector<FluidInterval> intervals;
  std::vector<double> switching_times;

  // Grid values.
  std::vector<double> t;
  std::vector<Regime> regime;
  std::vector<double> X, B, Q, w, wdot, v, b0, qtilde_w, qtilde_x, alpha, A, D, Lambda, S;

  [[nodiscard]] std::size_t size() const { return t.size(); }

  /// Index of the interval whose closed range contains `time`; at a switching
  /// time the later interval wins.
  [[nodiscard]] std::size_t interval_index(double time) const;

  /// Dense w on an OL interval (cubic Hermite through the RK4 nodes).
  [[nodiscard]] double w_at(std::size_t interval, double time) const;
  /// Dense X on a UL interval.
  [[nodiscard]] double x_at(std::size_t interval, double time) const;

  /// L(u) = u - w(u) on an OL interval, from the Hermite interpolant of w.
  [[nodiscard]] double l_map(std::size_t interval, double u) const;
  /// Inverse of L on an OL interval; nullopt when `u` lies beyond the
  /// computed range of L (only possible at the horizon).
  [[nodiscard]] std::optional<double> l_inverse(std::size_t interval, double u) const;

  /// Potential waiting time v(time) = L^{-1}(time) - time (0 in UL).
  [[nodiscard]] double v_at(double time) const;
};

/// Right-hand side of the head-of-line waiting-time ODE,
/// 1 - (s'(t) + s(t) mu) / (lambda(t - w) F^c(w)).
/// Throws NumericalError("queue boundary density vanished") when the
/// denominator drops below 1e-12.
double w_rate(const ModelSpec& spec, double t, double w);

/// One classical RK4 step of the waiting-time ODE from (t, w).
double step_w(const ModelSpec& spec, double t, double w, double dt);

/// X(start + t) for an underloaded interval entered with content x0:
/// int_0^t exp(-mu (t - u)) lambda(start + u) du + x0 exp(-mu t), by RK4.
double ul_content(const ModelSpec& spec, double t, double x0, double start, double step = 1e-3);

/// Queue content density without flow into service, lambda(t - x) F^c(x).
double qtilde(const ModelSpec& spec, double t, double x);
/// d qtilde / dx = -lambda'(t - x) F^c(x) - lambda(t - x) f(x).
double qtilde_x(const ModelSpec& spec, double t, double x);
/// Rate fluid enters service in an OL interval, s(t) mu + s'(t).
double service_entry_rate(const ModelSpec& spec, double t);

/// Solves the fluid model on [0, T]. Requires a valid spec (throws ModelError
/// otherwise), InfeasibleStaffingError when s mu + s' <= 0 inside an OL
/// interval, CriticalLoadingError when critical loading is not isolated.
FluidSolution solve_fluid(const ModelSpec& spec, double step = 1e-3);

/// Grid of potential waiting times (NaN where t + v(t) is not computable).
std::vector<double> solve_v(const FluidSolution& sol);

/// Queue density q(t, x): qtilde truncated at x = w(t); 0 in UL intervals.
double queue_density(const FluidSolution& sol, double t, double x);

/// Initial service-age density of an OL interval, b(start, x).
using AgeDensity = std::function<double(double)>;

/// Service content density b(t, x) in the OL interval containing t. With no
/// age density given, the interval starts from s(start) mu exp(-mu x).
double service_density(const FluidSolution& sol, double t, double x,
                       const AgeDensity& b_start = nullptr);

struct AbandonmentGrids {
  std::vector<double> alpha;  // rate
  std::vector<double> A;      // cumulative
};
AbandonmentGrids abandonment(const FluidSolution& sol);

/// alpha(t) = int_0^w lambda(t - x) f(x) dx for a given head-of-line wait.
double abandonment_rate(const ModelSpec& spec, double t, double w);

/// CSV with columns t, regime, X, B, Q, w, wdot, v, b0, qtilde_w, alpha, A, D.
void write_fluid_csv(const FluidSolution& sol, std::ostream& os);

}  // namespace tvq
