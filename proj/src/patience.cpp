#include "tvq/patience.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tvq/error.hpp"
#include "tvq/quadrature.hpp"

namespace tvq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Fritsch-Carlson slopes for a strictly increasing table.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  d[0] = delta[0];
  d[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 0.5 * (delta[i - 1] + delta[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a = d[i] / delta[i];
    const double b = d[i + 1] / delta[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      d[i] = tau * a * delta[i];
      d[i + 1] = tau * b * delta[i];
    }
  }
  return d;
}

struct TabEval {
  double cdf, pdf;
};

TabEval tab_eval(const PatienceDist::Tabulated& t, double x) {
  const double xk = t.x.back();
  if (x > xk) {
    const double surv_k = 1.0 - t.cdf.back();
    const double haz = t.slope.back() / surv_k;
    const double surv = surv_k * std::exp(-haz * (x - xk));
    return {1.0 - surv, haz * surv};
  }
  const std::size_t i = quad::locate(t.x, x);
  return {quad::hermite(t.x[i], t.x[i + 1], t.cdf[i], t.cdf[i + 1], t.slope[i], t.slope[i + 1], x),
          quad::hermite_slope(t.x[i], t.x[i + 1], t.cdf[i], t.cdf[i + 1], t.slope[i],
                              t.slope[i + 1], x)};
}

}  // namespace

PatienceDist::PatienceDist(Exponential e) : repr_(e) {
  if (!(e.rate > 0.0)) throw std::invalid_argument("exponential patience rate must be positive");
}

PatienceDist::PatienceDist(HyperExp2 h) : repr_(h) {
  if (!(h.p >= 0.0 && h.p <= 1.0)) throw std::invalid_argument("H2 mixing probability outside [0,1]");
  if (!(h.rate1 > 0.0 && h.rate2 > 0.0)) throw std::invalid_argument("H2 rates must be positive");
}

PatienceDist::PatienceDist(Tabulated t) : repr_(Exponential{}) {
  if (t.x.size() < 2 || t.x.size() != t.cdf.size()) {
    throw std::invalid_argument("tabulated patience needs >= 2 matching (x, cdf) points");
  }
  if (t.x.front() != 0.0 || t.cdf.front() != 0.0) {
    throw std::invalid_argument("tabulated patience must start at (0, 0)");
  }
  for (std::size_t i = 1; i < t.x.size(); ++i) {
    if (!(t.x[i] > t.x[i - 1]) || !(t.cdf[i] > t.cdf[i - 1])) {
      throw std::invalid_argument("tabulated patience x and cdf must be strictly increasing");
    }
  }
  if (!(t.cdf.back() < 1.0)) throw std::invalid_argument("tabulated patience cdf must stay below 1");
  t.slope = monotone_slopes(t.x, t.cdf);
  repr_ = std::move(t);
}

double PatienceDist::cdf(double x) const { return 1.0 - survival(x); }

double PatienceDist::survival(double x) const {
  return std::visit(overloaded{[x](const Exponential& e) { return std::exp(-e.rate * x); },
                               [x](const HyperExp2& h) {
                                 return h.p * std::exp(-h.rate1 * x) +
                                        (1.0 - h.p) * std::exp(-h.rate2 * x);
                               },
                               [x](const Tabulated& t) { return 1.0 - tab_eval(t, x).cdf; }},
                    repr_);
}

double PatienceDist::density(double x) const {
  return std::visit(
      overloaded{[x](const Exponential& e) { return e.rate * std::exp(-e.rate * x); },
                 [x](const HyperExp2& h) {
                   return h.p * h.rate1 * std::exp(-h.rate1 * x) +
                          (1.0 - h.p) * h.rate2 * std::exp(-h.rate2 * x);
                 },
                 [x](const Tabulated& t) { return tab_eval(t, x).pdf; }},
      repr_);
}

double PatienceDist::hazard_unchecked(double x) const {
  return std::visit(overloaded{[](const Exponential& e) { return e.rate; },
                               [x](const HyperExp2& h) {
                                 // Factor out the slower exponential so large x stays finite.
                                 const double m = std::min(h.rate1, h.rate2);
                                 const double a = h.p * std::exp(-(h.rate1 - m) * x);
                                 const double b = (1.0 - h.p) * std::exp(-(h.rate2 - m) * x);
                                 return (h.rate1 * a + h.rate2 * b) / (a + b);
                               },
                               [x](const Tabulated& t) {
                                 if (x > t.x.back()) return t.slope.back() / (1.0 - t.cdf.back());
                                 const auto e = tab_eval(t, x);
                                 return e.pdf / (1.0 - e.cdf);
                               }},
                    repr_);
}

double PatienceDist::hazard(double x) const {
  if (x < 0.0) throw std::domain_error("hazard requires x >= 0");
  if (!(survival(x) > 0.0)) throw NumericalError("patience support exhausted");
  return hazard_unchecked(x);
}

double PatienceDist::mean() const {
  return std::visit(
      overloaded{[](const Exponential& e) { return 1.0 / e.rate; },
                 [](const HyperExp2& h) { return h.p / h.rate1 + (1.0 - h.p) / h.rate2; },
                 [this](const Tabulated& t) {
                   double m = 0.0;
                   for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
                     m += quad::integrate([this](double x) { return survival(x); }, t.x[i],
                                          t.x[i + 1], 1, 16);
                   }
                   const double surv_k = 1.0 - t.cdf.back();
                   return m + surv_k * surv_k / t.slope.back();
                 }},
      repr_);
}

double PatienceDist::second_moment() const {
  return std::visit(
      overloaded{[](const Exponential& e) { return 2.0 / (e.rate * e.rate); },
                 [](const HyperExp2& h) {
                   return 2.0 * h.p / (h.rate1 * h.rate1) +
                          2.0 * (1.0 - h.p) / (h.rate2 * h.rate2);
                 },
                 [this](const Tabulated& t) {
                   // E[X^2] = 2 * int x F^c(x) dx, exponential tail in closed form.
                   double m = 0.0;
                   for (std::size_t i = 0; i + 1 < t.x.size(); ++i) {
                     m += quad::integrate([this](double x) { return 2.0 * x * survival(x); },
                                          t.x[i], t.x[i + 1], 1, 16);
                   }
                   const double surv_k = 1.0 - t.cdf.back();
                   const double haz = t.slope.back() / surv_k;
                   const double xk = t.x.back();
                   return m + 2.0 * surv_k * (xk / haz + 1.0 / (haz * haz));
                 }},
      repr_);
}

double PatienceDist::scv() const {
  const double m = mean();
  return second_moment() / (m * m) - 1.0;
}

double PatienceDist::sample(Rng& rng) const {
  return std::visit(
      overloaded{[&rng](const Exponential& e) { return rng.exponential(e.rate); },
                 [&rng](const HyperExp2& h) {
                   const double u = rng.uniform();
                   return rng.exponential(u < h.p ? h.rate1 : h.rate2);
                 },
                 [&rng](const Tabulated& t) {
                   const double u = rng.uniform();
                   const double fk = t.cdf.back();
                   if (u >= fk) {
                     const double haz = t.slope.back() / (1.0 - fk);
                     return t.x.back() + std::log((1.0 - fk) / (1.0 - u)) / haz;
                   }
                   const std::size_t i = quad::locate(t.cdf, u);
                   double lo = t.x[i], hi = t.x[i + 1];
                   for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
                     const double mid = 0.5 * (lo + hi);
                     (tab_eval(t, mid).cdf < u ? lo : hi) = mid;
                   }
                   return 0.5 * (lo + hi);
                 }},
      repr_);
}

std::string PatienceDist::kind() const {
  return std::visit(overloaded{[](const Exponential&) { return std::string("exponential"); },
                               [](const HyperExp2&) { return std::string("h2"); },
                               [](const Tabulated&) { return std::string("tabulated"); }},
                    repr_);
}

PatienceDist h2_from_scv(double mean, double scv) {
  if (!(mean > 0.0)) throw std::invalid_argument("H2 requires a positive mean");
  if (!(scv >= 1.0)) throw std::invalid_argument("H2 requires scv >= 1");
  const double theta = 1.0 / mean;
  const double p = 0.5 * (1.0 - std::sqrt((scv - 1.0) / (scv + 1.0)));
  return PatienceDist::hyperexp2(p, 2.0 * p * theta, 2.0 * (1.0 - p) * theta);
}

}  // namespace tvq
