#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "tvq/fluid.hpp"
#include "tvq/model.hpp"

namespace tvq {

/// Pointwise kernel quantities of an OL interval at time t with HWT w.
struct KernelPoint {
  double w = 0, wdot = 0;
  double qt = 0;       // qtilde(t, w)
  double b0 = 0;       // s mu + s'
  double h_f = 0;      // patience hazard at w
  double h = 0;        // (1 - w') (-lambda'(t - w)/lambda(t - w) - h_F(w))
  std::array<double, 3> I{};     // I_lambda, I_s, I_a
  std::array<double, 3> Ibar{};  // Ibar_1, 0, Ibar_3
  double Isq = 0;      // closed form of sum I_i^2
};

KernelPoint kernel_point(const ModelSpec& spec, double t, double w);

/// Kernel data for one OL interval, on the fluid nodes of that interval
/// (including nodes past T for an interval open at the horizon). Copies the
/// fluid interval so it can outlive the FluidSolution.
///
/// Everything integrated along the interval (log Hc, log F_w^c and the three
/// components of Var W*) uses RK4 on the node grid with w taken from the
/// Hermite interpolant between nodes.
struct Kernels {
  ModelSpec spec;
  FluidInterval fluid;
  std::size_t interval = 0;

  std::vector<double> t, w, wdot, qt, b0, h, h_f, Isq;
  std::array<std::vector<double>, 3> I;
  std::vector<double> ell;  // log Hc, 0 at the interval start
  std::vector<double> phi;  // log F_w^c
  std::array<std::vector<double>, 3> V;   // Var W*_i
  std::array<std::vector<double>, 3> dV;  // their time derivatives
  /// int_start^t H(t, L(r)) H(t, r) g(r) dr, the part of cov(X*, W*) from
  /// arrivals that have already reached service, divided by q~(t, w(t)).
  std::vector<double> cross;

  [[nodiscard]] std::size_t size() const { return t.size(); }
  [[nodiscard]] double start() const { return t.front(); }

  [[nodiscard]] KernelPoint point(double time) const;
  [[nodiscard]] double log_hc(double time) const;
  [[nodiscard]] double Hc(double time) const;
  /// H(t, u) = Hc(t) / Hc(u).
  [[nodiscard]] double H(double time, double u) const;
  [[nodiscard]] double J(int i, double time, double u) const;
  /// K_i(t, u) in the piecewise form of the X* representation (i = 0, 1, 2
  /// for the arrival, service and abandonment components).
  [[nodiscard]] double K(int i, double time, double u) const;

  [[nodiscard]] double Fwc(double time) const;
  [[nodiscard]] double var_w_star(double time) const;
  [[nodiscard]] double var_w_star(int i, double time) const;
};

/// Kernels for OL interval `interval` of the fluid solution. Throws
/// NumericalError("boundary density vanished") when q~(t, w(t)) < 1e-12.
Kernels build_kernels(const FluidSolution& fluid, std::size_t interval);
/// Kernels for every OL interval, in interval order.
std::vector<Kernels> build_kernels(const FluidSolution& fluid);

/// Var W*(t) at the kernel nodes.
std::vector<double> var_W_star(const Kernels& k);

/// Var X*(t) at the kernel nodes by the direct formula
/// int_{t-w}^t lambda(s) F^c(t-s) (c^2 F^c(t-s) + F(t-s)) ds + q~^2 Var W*.
std::vector<double> var_X_star(const Kernels& k);
/// Per-component split of the direct formula (arrival, service, abandonment).
std::array<std::vector<double>, 3> var_X_star_components(const Kernels& k);
/// Var X*(t) as sum_i int K_i(t, u)^2 du by composite Gauss-Legendre over u.
double var_X_star_kernel(const Kernels& k, double time);

double F_w_c(const Kernels& k, double time);

/// Var X(t) = Var X*(t) + var_x0 F_w^c(t)^2 at the kernel nodes.
std::vector<double> var_X_OL(const Kernels& k, double var_x0);

struct WaitVariances {
  std::vector<double> var_W_star, var_W, var_V_star, var_V;  // NaN where t + v(t) is unavailable
};
/// Waiting-time variances at the kernel nodes.
WaitVariances var_W_V(const Kernels& k, double var_x0);
/// Var V*(t) and Var V(t) at an arbitrary time of the interval.
std::array<double, 2> var_V_at(const Kernels& k, double var_x0, double time);

/// cov(X*(t), W*(t)) at the kernel nodes.
std::vector<double> cov_XW(const Kernels& k);

/// Variances of an underloaded interval at its nodes.
struct UlVariance {
  std::vector<double> t;
  std::vector<double> var_e;    // new arrivals
  std::vector<double> var_z;    // initial content
  std::vector<double> var_X;
  std::vector<double> m2;       // int e^{-2 mu (t-s)} lambda(s) ds
  std::vector<double> decay;    // e^{-mu (t - start)}
};
UlVariance var_UL(const ModelSpec& spec, const FluidSolution& fluid, double x0, double var_x0,
                  std::size_t interval);

/// Law of X-hat at a switching point and the one-sided limits of the
/// queue, in-service and potential-wait processes there.
struct SwitchDiagnostic {
  double time = 0;
  Regime from = Regime::Underloaded, to = Regime::Overloaded;
  double var_X = 0;
  double mean_Q = 0, var_Q = 0;  // X^+
  double mean_B = 0, var_B = 0;  // min(X, 0)
  double mean_V = 0, var_V = 0;  // X^+ / (s mu + s')
};

struct GaussianSolution {
  std::vector<double> t;
  std::vector<double> var_X, var_Xstar, var_W, var_Wstar, var_V, var_Vstar, cov_XW, Fwc;
  std::array<std::vector<double>, 3> var_X_comp;  // arrival, service, abandonment
  std::vector<double> interval_start;
  std::vector<double> interval_var_x0;   // propagated Var X-hat at each interval start
  std::vector<SwitchDiagnostic> switches;
  std::vector<Kernels> kernels;          // OL intervals only
  std::vector<std::size_t> kernel_of;    // interval -> index into kernels (or npos)
};

struct GaussianOptions {
  bool covariance = true;
};

/// Assembles all intervals, propagating Var X-hat across switching points.
GaussianSolution propagate(const FluidSolution& fluid, const GaussianOptions& opt = {});

/// Deterministic O(sqrt n) mean corrections from lambda_g and s_g.
struct MeanShift {
  std::vector<double> t, X, W;   // on the fluid grid
  std::vector<double> z;         // OL forcing term (0 in UL)
};
/// Throws ConfigError("refined terms not specified") without lambda_g/s_g.
MeanShift mean_shift_refined(const FluidSolution& fluid, const GaussianSolution& gauss);

/// CSV: t, var_X, var_Xstar, var_W, var_Wstar, var_V, cov_XW, Fwc, var_X_lambda,
/// var_X_s, var_X_a.
void write_gaussian_csv(const GaussianSolution& g, std::ostream& os);

}  // namespace tvq
