#include "tvq/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "tvq/csv.hpp"
#include "tvq/error.hpp"
#include "tvq/quadrature.hpp"

namespace tvq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDensityFloor = 1e-12;

// Integrated quantities along an interval. `y` is X in UL and w in OL.
struct State {
  double y = 0, a = 0, d = 0, lam = 0, s = 0;

  State operator+(const State& o) const { return {y + o.y, a + o.a, d + o.d, lam + o.lam, s + o.s}; }
  State operator*(double k) const { return {y * k, a * k, d * k, lam * k, s * k}; }
};

State rhs(const ModelSpec& m, Regime r, double t, const State& st) {
  const double lam = m.lambda.value(t);
  const double s = m.staffing.value(t);
  if (r == Regime::Underloaded) return {lam - m.mu * st.y, 0.0, m.mu * st.y, lam, s};
  return {w_rate(m, t, st.y), abandonment_rate(m, t, st.y), m.mu * s, lam, s};
}

State rk4(const ModelSpec& m, Regime r, double t, const State& st, double h) {
  const State k1 = rhs(m, r, t, st);
  const State k2 = rhs(m, r, t + 0.5 * h, st + k1 * (0.5 * h));
  const State k3 = rhs(m, r, t + 0.5 * h, st + k2 * (0.5 * h));
  const State k4 = rhs(m, r, t + h, st + k3 * h);
  return st + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

// RK4 on the leading component only; used while bracketing switching times.
double rk4_y(const ModelSpec& m, Regime r, double t, double y, double h) {
  if (r == Regime::Overloaded) return step_w(m, t, y, h);
  auto f = [&m](double tt, double yy) { return m.lambda.value(tt) - m.mu * yy; };
  const double k1 = f(t, y);
  const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = f(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Smallest h in (0, hmax] with g(h) crossing zero, given g(0) and g(hmax) of
// opposite sign (or g(hmax) == 0). Bisection to ~1e-14 in time.
template <class G>
double bisect_step(G&& g, double hmax) {
  double lo = 0.0, hi = hmax;
  const double g_lo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm > 0.0) == (g_lo > 0.0) && gm != 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double onset_tolerance(const ModelSpec& m, double t) {
  return 1e-9 * (1.0 + std::abs(m.lambda.value(t)));
}

std::string interval_text(double a, double b) {
  std::ostringstream os;
  os << "[" << a << ", " << b << "]";
  return os.str();
}

}  // namespace

const char* regime_label(Regime r) { return r == Regime::Overloaded ? "OL" : "UL"; }

double service_entry_rate(const ModelSpec& spec, double t) {
  return spec.staffing.value(t) * spec.mu + spec.staffing.deriv(t);
}

double qtilde(const ModelSpec& spec, double t, double x) {
  return spec.lambda.value(t - x) * spec.patience.survival(x);
}

double qtilde_x(const ModelSpec& spec, double t, double x) {
  return -spec.lambda.deriv(t - x) * spec.patience.survival(x) -
         spec.lambda.value(t - x) * spec.patience.density(x);
}

double w_rate(const ModelSpec& spec, double t, double w) {
  const double q = qtilde(spec, t, w);
  if (!(q >= kDensityFloor)) throw NumericalError("queue boundary density vanished");
  return 1.0 - service_entry_rate(spec, t) / q;
}

double step_w(const ModelSpec& spec, double t, double w, double dt) {
  const double k1 = w_rate(spec, t, w);
  const double k2 = w_rate(spec, t + 0.5 * dt, w + 0.5 * dt * k1);
  const double k3 = w_rate(spec, t + 0.5 * dt, w + 0.5 * dt * k2);
  const double k4 = w_rate(spec, t + dt, w + dt * k3);
  return w + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double abandonment_rate(const ModelSpec& spec, double t, double w) {
  if (w <= 0.0) return 0.0;
  return quad::integrate(
      [&spec, t](double x) { return spec.lambda.value(t - x) * spec.patience.density(x); }, 0.0,
      w, 2, 12);
}

double ul_content(const ModelSpec& spec, double t, double x0, double start, double step) {
  if (t <= 0.0) return x0;
  const long n = std::max(1L, static_cast<long>(std::ceil(t / step - 1e-9)));
  const double h = t / static_cast<double>(n);
  double x = x0;
  for (long k = 0; k < n; ++k) x = rk4_y(spec, Regime::Underloaded, start + k * h, x, h);
  return x;
}

FluidSolution solve_fluid(const ModelSpec& spec, double step) {
  require_valid(spec);
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  const double T = spec.horizon;
  const long N = std::lround(T / step);
  if (N < 1 || std::abs(static_cast<double>(N) * step - T) > 1e-9 * std::max(1.0, T)) {
    throw std::invalid_argument("grid step must divide the horizon");
  }
  const double eps = 1e-12 * std::max(1.0, T);
  auto grid_time = [&](long k) { return k == N ? T : static_cast<double>(k) * step; };
  auto grid_index = [&](double time) -> long {
    const long k = std::lround(time / step);
    return (k >= 0 && k <= N && std::abs(grid_time(k) - time) <= eps) ? k : -1;
  };
  auto next_grid = [&](double time) -> long {
    long k = static_cast<long>(std::floor((time + eps) / step)) + 1;
    while (k > 0 && grid_time(k - 1) > time + eps) --k;
    return k;
  };

  FluidSolution sol;
  sol.spec = spec;
  sol.step = step;

  const double s0 = spec.staffing.value(0.0);
  Regime regime = Regime::Underloaded;
  if (spec.x0 >= s0 - eps) {
    const double push = spec.lambda.value(0.0) - service_entry_rate(spec, 0.0);
    if (push > onset_tolerance(spec, 0.0)) regime = Regime::Overloaded;
  }

  double time = 0.0;
  State st{regime == Regime::Overloaded ? 0.0 : spec.x0, 0.0, 0.0, 0.0, 0.0};
  double x_start = spec.x0;

  while (true) {
    FluidInterval iv;
    iv.regime = regime;
    iv.start = time;
    iv.x_start = x_start;
    const bool ol = regime == Regime::Overloaded;

    auto push = [&](double tt, const State& s) {
      iv.t.push_back(tt);
      iv.grid.push_back(grid_index(tt));
      iv.y.push_back(s.y);
      iv.dy.push_back(rhs(spec, regime, tt, s).y);
      iv.cum_a.push_back(s.a);
      iv.cum_d.push_back(s.d);
      iv.cum_lambda.push_back(s.lam);
      iv.cum_s.push_back(s.s);
      if (ol) iv.lmap.push_back(tt - s.y);
    };
    auto check_feasible = [&](double tt) {
      if (!(service_entry_rate(spec, tt) > 0.0)) {
        throw InfeasibleStaffingError("staffing infeasible in OL interval " +
                                      interval_text(iv.start, tt));
      }
    };

    if (ol) {
      check_feasible(time);
      if (!(spec.lambda.value(time) - service_entry_rate(spec, time) > onset_tolerance(spec, time))) {
        throw CriticalLoadingError("non-isolated critical loading at t = " + std::to_string(time));
      }
    }
    push(time, st);

    bool switched = false;
    long extension_steps = 0;
    const long max_extension = N;
    while (true) {
      const long k = next_grid(time);
      const bool beyond = k > N;
      if (beyond && !ol) break;
      if (beyond && (iv.lmap.back() >= T || extension_steps >= max_extension)) break;
      const double target = beyond ? time + step : grid_time(k);
      if (beyond) ++extension_steps;
      const double h = target - time;
      if (ol) check_feasible(target);
      State next = rk4(spec, regime, time, st, h);

      const bool crossed = ol ? next.y <= 0.0 : next.y - spec.staffing.value(target) >= 0.0;
      if (crossed) {
        double hs;
        if (ol) {
          hs = bisect_step([&](double hh) { return hh == 0.0 ? st.y : rk4_y(spec, regime, time, st.y, hh); }, h);
        } else {
          hs = bisect_step(
              [&](double hh) {
                return rk4_y(spec, regime, time, st.y, hh) - spec.staffing.value(time + hh);
              },
              h);
        }
        const double tau = time + hs;
        State at = rk4(spec, regime, time, st, hs);
        const double push_rate = spec.lambda.value(tau) - service_entry_rate(spec, tau);
        if (ol) {
          at.y = 0.0;
          if (!(push_rate < -onset_tolerance(spec, tau))) {
            throw CriticalLoadingError("non-isolated critical loading: w reached 0 at t = " +
                                       std::to_string(tau) + " while arrivals still exceed b(t,0)");
          }
        } else {
          at.y = spec.staffing.value(tau);
          if (!(push_rate > onset_tolerance(spec, tau))) {
            throw CriticalLoadingError("non-isolated critical loading: X reached s at t = " +
                                       std::to_string(tau) + " without overloading");
          }
        }
        push(tau, at);
        st = at;
        time = tau;
        if (tau <= T + eps) {
          iv.end = tau;
          iv.closed_by_switch = true;
          switched = tau < T - eps;
        }
        break;
      }
      push(target, next);
      st = next;
      time = target;
    }
    if (!iv.closed_by_switch) iv.end = T;
    iv.horizon_nodes = static_cast<std::size_t>(
        std::upper_bound(iv.t.begin(), iv.t.end(), T + eps) - iv.t.begin());
    sol.intervals.push_back(std::move(iv));
    if (!switched) break;
    sol.switching_times.push_back(time);
    if (regime == Regime::Underloaded) {
      regime = Regime::Overloaded;
      x_start = spec.staffing.value(time);
      st.y = 0.0;
    } else {
      regime = Regime::Underloaded;
      x_start = spec.staffing.value(time);
      st.y = x_start;
    }
  }

  // Assemble the uniform grid; at a shared switching grid point the later
  // interval overwrites the earlier one.
  const auto n = static_cast<std::size_t>(N + 1);
  sol.t.resize(n);
  for (std::size_t k = 0; k < n; ++k) sol.t[k] = grid_time(static_cast<long>(k));
  sol.regime.assign(n, Regime::Underloaded);
  for (auto* v : {&sol.X, &sol.B, &sol.Q, &sol.w, &sol.wdot, &sol.v, &sol.b0, &sol.qtilde_w,
                  &sol.qtilde_x, &sol.alpha, &sol.A, &sol.D, &sol.Lambda, &sol.S}) {
    v->assign(n, kNaN);
  }
  for (std::size_t i = 0; i < sol.intervals.size(); ++i) {
    const auto& iv = sol.intervals[i];
    for (std::size_t j = 0; j < iv.horizon_nodes; ++j) {
      if (iv.grid[j] < 0) continue;
      const auto k = static_cast<std::size_t>(iv.grid[j]);
      const double tt = iv.t[j];
      const double s = spec.staffing.value(tt);
      sol.regime[k] = iv.regime;
      sol.b0[k] = service_entry_rate(spec, tt);
      sol.A[k] = iv.cum_a[j];
      sol.D[k] = iv.cum_d[j];
      sol.Lambda[k] = iv.cum_lambda[j];
      sol.S[k] = iv.cum_s[j];
      if (iv.overloaded()) {
        const double w = iv.y[j];
        const double q = quad::integrate([&](double x) { return qtilde(spec, tt, x); }, 0.0, w, 2, 12);
        sol.w[k] = w;
        sol.wdot[k] = iv.dy[j];
        sol.Q[k] = q;
        sol.B[k] = s;
        sol.X[k] = s + q;
        sol.qtilde_w[k] = qtilde(spec, tt, w);
        sol.qtilde_x[k] = qtilde_x(spec, tt, w);
        sol.alpha[k] = abandonment_rate(spec, tt, w);
        const auto u = sol.l_inverse(i, tt);
        sol.v[k] = u ? *u - tt : kNaN;
      } else {
        sol.X[k] = iv.y[j];
        sol.B[k] = iv.y[j];
        sol.Q[k] = 0.0;
        sol.w[k] = sol.wdot[k] = sol.v[k] = 0.0;
        sol.qtilde_w[k] = qtilde(spec, tt, 0.0);
        sol.qtilde_x[k] = qtilde_x(spec, tt, 0.0);
        sol.alpha[k] = 0.0;
      }
    }
  }
  return sol;
}

std::size_t FluidSolution::interval_index(double time) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].start <= time) idx = i;
  }
  return idx;
}

double FluidInterval::y_at(double time) const { return quad::interp_hermite(t, y, dy, time); }

std::optional<double> FluidInterval::l_inverse(double u) const {
  if (!overloaded()) return u;
  const double tol = 1e-12 * std::max(1.0, std::abs(u));
  if (u < lmap.front() - tol || u > lmap.back() + tol) return std::nullopt;
  const std::size_t c = quad::locate(lmap, u);
  const double t0 = t[c], t1 = t[c + 1];
  const double l0 = lmap[c], l1 = lmap[c + 1];
  const double d0 = 1.0 - dy[c], d1 = 1.0 - dy[c + 1];
  if (u <= l0) return t0;
  if (u >= l1) return t1;
  // Newton on the Hermite cell, safeguarded by the bracket [lo, hi].
  double lo = t0, hi = t1;
  double x = t0 + (u - l0) / (l1 - l0) * (t1 - t0);
  for (int it = 0; it < 60; ++it) {
    const double f = quad::hermite(t0, t1, l0, l1, d0, d1, x) - u;
    if (f > 0.0) hi = x; else lo = x;
    const double fp = quad::hermite_slope(t0, t1, l0, l1, d0, d1, x);
    double nx = fp > 0.0 ? x - f / fp : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    const bool done = std::abs(nx - x) <= 1e-15 * std::max(1.0, std::abs(x));
    x = nx;
    if (done) break;
  }
  return x;
}

double FluidSolution::w_at(std::size_t i, double time) const {
  const auto& iv = intervals.at(i);
  return iv.overloaded() ? iv.y_at(time) : 0.0;
}

double FluidSolution::x_at(std::size_t i, double time) const {
  const auto& iv = intervals.at(i);
  if (iv.overloaded()) {
    const double w = iv.y_at(time);
    return spec.staffing.value(time) +
           quad::integrate([&](double x) { return qtilde(spec, time, x); }, 0.0, w, 2, 12);
  }
  return iv.y_at(time);
}

double FluidSolution::l_map(std::size_t i, double u) const { return u - w_at(i, u); }

std::optional<double> FluidSolution::l_inverse(std::size_t i, double u) const {
  return intervals.at(i).l_inverse(u);
}

double FluidSolution::v_at(double time) const {
  const std::size_t i = interval_index(time);
  if (!intervals[i].overloaded()) return 0.0;
  const auto u = l_inverse(i, time);
  return u ? *u - time : kNaN;
}

std::vector<double> solve_v(const FluidSolution& sol) { return sol.v; }

double queue_density(const FluidSolution& sol, double t, double x) {
  const std::size_t i = sol.interval_index(t);
  if (!sol.intervals[i].overloaded() || x < 0.0) return 0.0;
  if (x > sol.w_at(i, t)) return 0.0;
  return qtilde(sol.spec, t, x);
}

double service_density(const FluidSolution& sol, double t, double x, const AgeDensity& b_start) {
  const std::size_t i = sol.interval_index(t);
  const auto& iv = sol.intervals[i];
  const auto& m = sol.spec;
  const double elapsed = t - iv.start;
  if (x <= elapsed) return service_entry_rate(m, t - x) * std::exp(-m.mu * x);
  const double age0 = x - elapsed;
  const double initial = b_start ? b_start(age0)
                                 : m.staffing.value(iv.start) * m.mu * std::exp(-m.mu * age0);
  return initial * std::exp(-m.mu * elapsed);
}

AbandonmentGrids abandonment(const FluidSolution& sol) { return {sol.alpha, sol.A}; }

void write_fluid_csv(const FluidSolution& sol, std::ostream& os) {
  CsvWriter csv(os, {"t", "regime", "X", "B", "Q", "w", "wdot", "v", "b0", "qtilde_w", "alpha",
                     "A", "D"});
  for (std::size_t k = 0; k < sol.size(); ++k) {
    csv.cell(sol.t[k]).cell(regime_label(sol.regime[k]));
    for (double v : {sol.X[k], sol.B[k], sol.Q[k], sol.w[k], sol.wdot[k], sol.v[k], sol.b0[k],
                     sol.qtilde_w[k], sol.alpha[k], sol.A[k], sol.D[k]}) {
      csv.cell(v);
    }
    csv.end_row();
  }
}

}  // namespace tvq
