#include "tvq/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "tvq/csv.hpp"
#include "tvq/error.hpp"
#include "tvq/quadrature.hpp"

namespace tvq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kNone = static_cast<std::size_t>(-1);

double positive_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

// Composite Gauss-Legendre over [a, b] with panel breaks at the nodes `t`.
template <class F>
double integrate_on_nodes(const std::vector<double>& t, double a, double b, F&& f, int order = 4) {
  if (!(b > a)) return 0.0;
  const quad::Rule& rule = quad::gauss_legendre(order);
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) acc += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * acc;
  };
  auto it = std::upper_bound(t.begin(), t.end(), a);
  double lo = a, sum = 0.0;
  for (; it != t.end() && *it < b; ++it) {
    sum += panel(lo, *it);
    lo = *it;
  }
  return sum + panel(lo, b);
}

// Integral over (t - w, t] of the queue content density split into the
// arrival part c^2 lambda (F^c)^2 and the abandonment part lambda F F^c.
std::array<double, 2> queue_integrals(const ModelSpec& m, double t, double w) {
  if (w <= 0.0) return {0.0, 0.0};
  const double c2 = m.c_lambda * m.c_lambda;
  const quad::Rule& rule = quad::gauss_legendre(12);
  std::array<double, 2> out{0.0, 0.0};
  const int panels = 2;
  const double width = w / panels;
  for (int p = 0; p < panels; ++p) {
    const double half = 0.5 * width, mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = mid + half * rule.nodes[k];  // age t - s
      const double lam = m.lambda.value(t - x);
      const double fc = m.patience.survival(x);
      out[0] += rule.weights[k] * half * c2 * lam * fc * fc;
      out[1] += rule.weights[k] * half * lam * fc * (1.0 - fc);
    }
  }
  return out;
}

}  // namespace

KernelPoint kernel_point(const ModelSpec& m, double t, double w) {
  KernelPoint p;
  p.w = std::max(0.0, w);
  const double lam = m.lambda.value(t - p.w);
  const double fc = m.patience.survival(p.w);
  const double F = 1.0 - fc;
  p.qt = lam * fc;
  if (!(p.qt >= 1e-12)) throw NumericalError("boundary density vanished");
  const double s_mu = m.staffing.value(t) * m.mu;
  p.b0 = s_mu + m.staffing.deriv(t);
  p.wdot = 1.0 - p.b0 / p.qt;
  p.h_f = m.patience.hazard_unchecked(p.w);
  p.h = (1.0 - p.wdot) * (-m.lambda.deriv(t - p.w) / lam - p.h_f);
  const double c = m.c_lambda;
  p.I = {c * positive_sqrt(fc * p.b0) / p.qt, -positive_sqrt(s_mu) / p.qt,
         -positive_sqrt(F * p.b0) / p.qt};
  p.Ibar = {c * fc / p.qt, 0.0, -positive_sqrt(fc * F) / p.qt};
  p.Isq = (s_mu + (F + c * c * fc) * p.b0) / (p.qt * p.qt);
  return p;
}

KernelPoint Kernels::point(double time) const { return kernel_point(spec, time, fluid.y_at(time)); }

double Kernels::log_hc(double time) const { return quad::interp_hermite(t, ell, h, time); }

double Kernels::Hc(double time) const { return std::exp(log_hc(time)); }

double Kernels::H(double time, double u) const { return std::exp(log_hc(time) - log_hc(u)); }

double Kernels::J(int i, double time, double u) const { return point(u).I.at(i) * H(time, u); }

double Kernels::K(int i, double time, double u) const {
  const KernelPoint pt = point(time);
  const double lam = spec.lambda.value(u);
  if (i == 1) return pt.qt * point(u).I[1] * H(time, u);
  const double boundary = time - pt.w;
  if (u >= boundary) {
    const double fc = spec.patience.survival(time - u);
    if (i == 0) return spec.c_lambda * fc * std::sqrt(lam);
    return -positive_sqrt(lam * (1.0 - fc) * fc);
  }
  const double r = fluid.l_inverse(u).value();
  return pt.qt * std::sqrt(lam) * point(r).Ibar.at(i) * H(time, r);
}

double Kernels::Fwc(double time) const {
  const std::size_t c = quad::locate(t, time);
  return std::exp(
      quad::hermite(t[c], t[c + 1], phi[c], phi[c + 1], -h_f[c], -h_f[c + 1], time));
}

double Kernels::var_w_star(int i, double time) const {
  return quad::interp_hermite(t, V.at(i), dV.at(i), time);
}

double Kernels::var_w_star(double time) const {
  return var_w_star(0, time) + var_w_star(1, time) + var_w_star(2, time);
}

Kernels build_kernels(const FluidSolution& fluid, std::size_t interval) {
  const auto& iv = fluid.intervals.at(interval);
  if (!iv.overloaded()) throw std::invalid_argument("kernels need an overloaded interval");
  Kernels k;
  k.spec = fluid.spec;
  k.fluid = iv;
  k.interval = interval;
  k.t = iv.t;
  const std::size_t n = k.t.size();
  for (auto* v : {&k.w, &k.wdot, &k.qt, &k.b0, &k.h, &k.h_f, &k.Isq, &k.ell, &k.phi, &k.cross}) {
    v->assign(n, 0.0);
  }
  for (int i = 0; i < 3; ++i) {
    k.I[i].assign(n, 0.0);
    k.V[i].assign(n, 0.0);
    k.dV[i].assign(n, 0.0);
  }
  std::vector<KernelPoint> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const KernelPoint p = kernel_point(k.spec, k.t[j], iv.y[j]);
    pts[j] = p;
    k.w[j] = p.w;
    k.wdot[j] = p.wdot;
    k.qt[j] = p.qt;
    k.b0[j] = p.b0;
    k.h[j] = p.h;
    k.h_f[j] = p.h_f;
    k.Isq[j] = p.Isq;
    for (int i = 0; i < 3; ++i) k.I[i][j] = p.I[i];
  }

  // log Hc, log F_w^c and Var W*_i: linear ODEs with coefficients from the
  // kernel point, integrated together by RK4.
  using State = std::array<double, 5>;
  auto rhs = [&](const KernelPoint& p, const State& y) {
    return State{p.h, -p.h_f, 2 * p.h * y[2] + p.I[0] * p.I[0], 2 * p.h * y[3] + p.I[1] * p.I[1],
                 2 * p.h * y[4] + p.I[2] * p.I[2]};
  };
  auto axpy = [](const State& y, double a, const State& d) {
    State r;
    for (int i = 0; i < 5; ++i) r[i] = y[i] + a * d[i];
    return r;
  };
  State y{0, 0, 0, 0, 0};
  for (std::size_t j = 0;; ++j) {
    k.ell[j] = y[0];
    k.phi[j] = y[1];
    const State d = rhs(pts[j], y);
    for (int i = 0; i < 3; ++i) {
      k.V[i][j] = y[2 + i];
      k.dV[i][j] = d[2 + i];
    }
    if (j + 1 == n) break;
    const double dt = k.t[j + 1] - k.t[j];
    const KernelPoint mid = k.point(k.t[j] + 0.5 * dt);
    const State k2 = rhs(mid, axpy(y, 0.5 * dt, d));
    const State k3 = rhs(mid, axpy(y, 0.5 * dt, k2));
    const State k4 = rhs(pts[j + 1], axpy(y, dt, k3));
    for (int i = 0; i < 5; ++i) y[i] += dt / 6.0 * (d[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }

  // Delayed cross term of the covariance: R' = 2 h R + H(t, L(t)) g(t).
  auto forcing = [&](double time, const KernelPoint& p) {
    const double u = time - p.w;
    const KernelPoint pu = k.point(u);
    const double g = std::sqrt(k.spec.lambda.value(u)) * (1.0 - p.wdot) *
                     (pu.I[0] * p.Ibar[0] + pu.I[2] * p.Ibar[2]);
    return std::exp(k.log_hc(time) - k.log_hc(u)) * g;
  };
  double R = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double dt = k.t[j + 1] - k.t[j];
    const double tm = k.t[j] + 0.5 * dt;
    const KernelPoint mid = k.point(tm);
    const double f1 = 2 * pts[j].h * R + forcing(k.t[j], pts[j]);
    const double fm = forcing(tm, mid);
    const double f2 = 2 * mid.h * (R + 0.5 * dt * f1) + fm;
    const double f3 = 2 * mid.h * (R + 0.5 * dt * f2) + fm;
    const double f4 = 2 * pts[j + 1].h * (R + dt * f3) + forcing(k.t[j + 1], pts[j + 1]);
    R += dt / 6.0 * (f1 + 2 * f2 + 2 * f3 + f4);
    k.cross[j + 1] = R;
  }
  return k;
}

std::vector<Kernels> build_kernels(const FluidSolution& fluid) {
  std::vector<Kernels> out;
  for (std::size_t i = 0; i < fluid.intervals.size(); ++i) {
    if (fluid.intervals[i].overloaded()) out.push_back(build_kernels(fluid, i));
  }
  return out;
}

std::vector<double> var_W_star(const Kernels& k) {
  std::vector<double> out(k.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = k.V[0][j] + k.V[1][j] + k.V[2][j];
  return out;
}

std::array<std::vector<double>, 3> var_X_star_components(const Kernels& k) {
  std::array<std::vector<double>, 3> out;
  for (auto& v : out) v.resize(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const auto direct = queue_integrals(k.spec, k.t[j], k.w[j]);
    const double q2 = k.qt[j] * k.qt[j];
    out[0][j] = direct[0] + q2 * k.V[0][j];
    out[1][j] = q2 * k.V[1][j];
    out[2][j] = direct[1] + q2 * k.V[2][j];
  }
  return out;
}

std::vector<double> var_X_star(const Kernels& k) {
  const auto c = var_X_star_components(k);
  std::vector<double> out(k.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = c[0][j] + c[1][j] + c[2][j];
  return out;
}

double var_X_star_kernel(const Kernels& k, double time) {
  const KernelPoint pt = k.point(time);
  const double ell_t = k.log_hc(time);
  const double boundary = time - pt.w;
  const double c = k.spec.c_lambda;
  const double tau = k.start();
  // Arrivals still waiting or abandoned: u in [t - w(t), t].
  const double recent = integrate_on_nodes(k.t, boundary, time, [&](double u) {
    const double fc = k.spec.patience.survival(time - u);
    return k.spec.lambda.value(u) * (c * c * fc * fc + (1.0 - fc) * fc);
  });
  // Arrivals that reached service at r = L^{-1}(u).
  const double served = integrate_on_nodes(k.t, tau, boundary, [&](double u) {
    const double r = k.fluid.l_inverse(u).value();
    const KernelPoint pr = k.point(r);
    const double hr = std::exp(ell_t - k.log_hc(r));
    const double kb = pt.qt * hr;
    return k.spec.lambda.value(u) * kb * kb * (pr.Ibar[0] * pr.Ibar[0] + pr.Ibar[2] * pr.Ibar[2]);
  });
  const double service = integrate_on_nodes(k.t, tau, time, [&](double u) {
    const double kk = pt.qt * k.point(u).I[1] * std::exp(ell_t - k.log_hc(u));
    return kk * kk;
  });
  return recent + served + service;
}

double F_w_c(const Kernels& k, double time) { return k.Fwc(time); }

std::vector<double> var_X_OL(const Kernels& k, double var_x0) {
  auto out = var_X_star(k);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += var_x0 * std::exp(2 * k.phi[j]);
  return out;
}

std::array<double, 2> var_V_at(const Kernels& k, double var_x0, double time) {
  const auto u = k.fluid.l_inverse(time);
  if (!u || *u > k.t.back()) return {kNaN, kNaN};
  const KernelPoint p = k.point(*u);
  const double scale = (1.0 - p.wdot) * (1.0 - p.wdot);
  const double vstar = k.var_w_star(*u) / scale;
  const double fwc = k.Fwc(*u);
  return {vstar, vstar + var_x0 * fwc * fwc / (p.b0 * p.b0)};
}

WaitVariances var_W_V(const Kernels& k, double var_x0) {
  WaitVariances out;
  out.var_W_star = var_W_star(k);
  const std::size_t n = k.size();
  out.var_W.resize(n);
  out.var_V_star.resize(n);
  out.var_V.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.var_W[j] = out.var_W_star[j] + var_x0 * std::exp(2 * k.phi[j]) / (k.qt[j] * k.qt[j]);
    const auto v = var_V_at(k, var_x0, k.t[j]);
    out.var_V_star[j] = v[0];
    out.var_V[j] = v[1];
  }
  return out;
}

std::vector<double> cov_XW(const Kernels& k) {
  const std::size_t n = k.size();
  const double c = k.spec.c_lambda;
  std::vector<double> out(n, 0.0);
  // sum over i in {arrival, abandonment} of J_i K_i at (t, u) for u >= L(t).
  auto recent = [&](double time, double ell_t, double u, double i0, double i2, double ell_u) {
    const double fc = k.spec.patience.survival(time - u);
    const double lam = k.spec.lambda.value(u);
    const double ka0 = c * fc * std::sqrt(lam);
    const double ka2 = -positive_sqrt(lam * (1.0 - fc) * fc);
    return std::exp(ell_t - ell_u) * (i0 * ka0 + i2 * ka2);
  };
  for (std::size_t j = 1; j < n; ++j) {
    const double time = k.t[j];
    const double boundary = time - k.w[j];
    // Trapezoid over the nodes in [L(t), t], with a partial first cell.
    std::size_t first = static_cast<std::size_t>(
        std::lower_bound(k.t.begin(), k.t.begin() + static_cast<long>(j) + 1, boundary) - k.t.begin());
    double acc = 0.0;
    double prev_u = boundary;
    {
      const KernelPoint pb = k.point(boundary);
      double prev_f = recent(time, k.ell[j], boundary, pb.I[0], pb.I[2], k.log_hc(boundary));
      for (std::size_t m = first; m <= j; ++m) {
        const double f = recent(time, k.ell[j], k.t[m], k.I[0][m], k.I[2][m], k.ell[m]);
        acc += 0.5 * (f + prev_f) * (k.t[m] - prev_u);
        prev_u = k.t[m];
        prev_f = f;
      }
    }
    out[j] = acc + k.qt[j] * (k.cross[j] + k.V[1][j]);
  }
  return out;
}

UlVariance var_UL(const ModelSpec& spec, const FluidSolution& fluid, double x0, double var_x0,
                  std::size_t interval) {
  const auto& iv = fluid.intervals.at(interval);
  if (iv.overloaded()) throw std::invalid_argument("var_UL needs an underloaded interval");
  UlVariance out;
  const std::size_t n = iv.t.size();
  out.t = iv.t;
  out.var_e.resize(n);
  out.var_z.resize(n);
  out.var_X.resize(n);
  out.m2.resize(n);
  out.decay.resize(n);
  const double mu = spec.mu;
  const double c2 = spec.c_lambda * spec.c_lambda;
  auto f = [&](double t, double m) { return spec.lambda.value(t) - 2 * mu * m; };
  double m2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0) {
      const double t0 = iv.t[j - 1], dt = iv.t[j] - t0;
      const double k1 = f(t0, m2);
      const double k2 = f(t0 + 0.5 * dt, m2 + 0.5 * dt * k1);
      const double k3 = f(t0 + 0.5 * dt, m2 + 0.5 * dt * k2);
      const double k4 = f(t0 + dt, m2 + dt * k3);
      m2 += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    const double decay = std::exp(-mu * (iv.t[j] - iv.start));
    const double xe = iv.y[j] - x0 * decay;
    out.m2[j] = m2;
    out.decay[j] = decay;
    out.var_e[j] = (c2 - 1.0) * m2 + xe;
    out.var_z[j] = x0 * (1.0 - decay) * decay + var_x0 * decay * decay;
    out.var_X[j] = out.var_e[j] + out.var_z[j];
  }
  return out;
}

GaussianSolution propagate(const FluidSolution& fluid, const GaussianOptions& opt) {
  GaussianSolution g;
  const std::size_t N = fluid.size();
  g.t = fluid.t;
  for (auto* v : {&g.var_X, &g.var_Xstar, &g.var_W, &g.var_Wstar, &g.var_V, &g.var_Vstar,
                  &g.cov_XW, &g.Fwc}) {
    v->assign(N, kNaN);
  }
  for (auto& v : g.var_X_comp) v.assign(N, kNaN);
  g.kernel_of.assign(fluid.intervals.size(), kNone);

  const double c2 = fluid.spec.c_lambda * fluid.spec.c_lambda;
  double var_x0 = fluid.spec.var_x0;
  for (std::size_t i = 0; i < fluid.intervals.size(); ++i) {
    const auto& iv = fluid.intervals[i];
    g.interval_start.push_back(iv.start);
    g.interval_var_x0.push_back(var_x0);
    double var_end = 0.0;
    if (iv.overloaded()) {
      Kernels k = build_kernels(fluid, i);
      const auto comp = var_X_star_components(k);
      const auto wv = var_W_V(k, var_x0);
      const auto cov = opt.covariance ? cov_XW(k) : std::vector<double>(k.size(), kNaN);
      std::vector<double> vx(k.size());
      for (std::size_t j = 0; j < k.size(); ++j) {
        const double xs = comp[0][j] + comp[1][j] + comp[2][j];
        const double fwc = std::exp(k.phi[j]);
        vx[j] = xs + var_x0 * fwc * fwc;
        if (iv.grid[j] < 0) continue;
        const auto m = static_cast<std::size_t>(iv.grid[j]);
        g.var_Xstar[m] = xs;
        g.var_X[m] = vx[j];
        g.Fwc[m] = fwc;
        for (int c = 0; c < 3; ++c) g.var_X_comp[c][m] = comp[c][j];
        g.var_Wstar[m] = wv.var_W_star[j];
        g.var_W[m] = wv.var_W[j];
        g.var_Vstar[m] = wv.var_V_star[j];
        g.var_V[m] = wv.var_V[j];
        g.cov_XW[m] = cov[j];
      }
      // The interval's last node at or before T is its right endpoint.
      var_end = vx[iv.horizon_nodes - 1];
      g.kernel_of[i] = g.kernels.size();
      g.kernels.push_back(std::move(k));
    } else {
      const UlVariance u = var_UL(fluid.spec, fluid, iv.x_start, var_x0, i);
      for (std::size_t j = 0; j < u.t.size(); ++j) {
        if (iv.grid[j] < 0) continue;
        const auto m = static_cast<std::size_t>(iv.grid[j]);
        g.var_X[m] = u.var_X[j];
        g.var_Xstar[m] = u.var_e[j];
        g.Fwc[m] = u.decay[j];
        g.var_X_comp[0][m] = c2 * u.m2[j];
        g.var_X_comp[1][m] = u.var_e[j] - c2 * u.m2[j];
        g.var_X_comp[2][m] = 0.0;
        g.var_W[m] = g.var_Wstar[m] = g.var_V[m] = g.var_Vstar[m] = g.cov_XW[m] = 0.0;
      }
      var_end = u.var_X[iv.horizon_nodes - 1];
    }
    if (i + 1 < fluid.intervals.size()) {
      SwitchDiagnostic d;
      d.time = iv.end;
      d.from = iv.regime;
      d.to = fluid.intervals[i + 1].regime;
      d.var_X = var_end;
      const double sd = std::sqrt(std::max(0.0, var_end));
      const double half_var = var_end * (0.5 - 0.5 / std::numbers::pi);
      d.mean_Q = sd / std::sqrt(2 * std::numbers::pi);
      d.var_Q = half_var;
      d.mean_B = -d.mean_Q;
      d.var_B = half_var;
      const double b0 = service_entry_rate(fluid.spec, iv.end);
      d.mean_V = d.mean_Q / b0;
      d.var_V = half_var / (b0 * b0);
      g.switches.push_back(d);
    }
    var_x0 = var_end;
  }
  return g;
}

MeanShift mean_shift_refined(const FluidSolution& fluid, const GaussianSolution& gauss) {
  const ModelSpec& m = fluid.spec;
  if (!m.refined()) throw ConfigError("refined terms not specified");
  const SmoothFn zero = SmoothFn::constant(0.0);
  const SmoothFn& lg = m.lambda_g ? *m.lambda_g : zero;
  const SmoothFn& sg = m.staffing_g ? *m.staffing_g : zero;
  const std::size_t N = fluid.size();
  MeanShift out;
  out.t = fluid.t;
  out.X.assign(N, kNaN);
  out.W.assign(N, kNaN);
  out.z.assign(N, 0.0);

  double m0 = 0.0;
  for (std::size_t i = 0; i < fluid.intervals.size(); ++i) {
    const auto& iv = fluid.intervals[i];
    const std::size_t n = iv.horizon_nodes;
    std::vector<double> xs(n);
    if (iv.overloaded()) {
      const Kernels& k = gauss.kernels.at(gauss.kernel_of.at(i));
      auto z = [&](double t, const KernelPoint& p) {
        return (sg.value(t) * m.mu + lg.value(t - p.w) + sg.deriv(t)) / p.qt;
      };
      auto f = [&](double t, double y) {
        const KernelPoint p = k.point(t);
        return p.h * y - z(t, p);
      };
      double wg = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
          const double t0 = k.t[j - 1], dt = k.t[j] - t0;
          const double k1 = f(t0, wg);
          const double k2 = f(t0 + 0.5 * dt, wg + 0.5 * dt * k1);
          const double k3 = f(t0 + 0.5 * dt, wg + 0.5 * dt * k2);
          const double k4 = f(t0 + dt, wg + dt * k3);
          wg += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        const double t = k.t[j];
        const double w = k.w[j];
        const double q1g = w > 0.0 ? quad::integrate(
                                         [&](double x) {
                                           return m.patience.survival(x) * lg.value(t - x);
                                         },
                                         0.0, w, 2, 12)
                                   : 0.0;
        const double fwc = std::exp(k.phi[j]);
        xs[j] = q1g + k.qt[j] * wg + m0 * fwc;
        if (iv.grid[j] < 0) continue;
        const auto idx = static_cast<std::size_t>(iv.grid[j]);
        out.X[idx] = xs[j];
        out.W[idx] = wg + m0 * fwc / k.qt[j];
        out.z[idx] = z(t, k.point(t));
      }
    } else {
      auto f = [&](double t, double y) { return -m.mu * y + lg.value(t); };
      double y = m0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) {
          const double t0 = iv.t[j - 1], dt = iv.t[j] - t0;
          const double k1 = f(t0, y);
          const double k2 = f(t0 + 0.5 * dt, y + 0.5 * dt * k1);
          const double k3 = f(t0 + 0.5 * dt, y + 0.5 * dt * k2);
          const double k4 = f(t0 + dt, y + dt * k3);
          y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        xs[j] = y;
        if (iv.grid[j] < 0) continue;
        const auto idx = static_cast<std::size_t>(iv.grid[j]);
        out.X[idx] = y;
        out.W[idx] = 0.0;
        out.z[idx] = 0.0;
      }
    }
    m0 = xs[n - 1];
  }
  return out;
}

void write_gaussian_csv(const GaussianSolution& g, std::ostream& os) {
  CsvWriter csv(os, {"t", "var_X", "var_Xstar", "var_W", "var_Wstar", "var_V", "cov_XW", "Fwc",
                     "var_X_lambda", "var_X_s", "var_X_a"});
  for (std::size_t k = 0; k < g.t.size(); ++k) {
    for (double v : {g.t[k], g.var_X[k], g.var_Xstar[k], g.var_W[k], g.var_Wstar[k], g.var_V[k],
                     g.cov_XW[k], g.Fwc[k], g.var_X_comp[0][k], g.var_X_comp[1][k],
                     g.var_X_comp[2][k]}) {
      csv.cell(v);
    }
    csv.end_row();
  }
}

}  // namespace tvq
