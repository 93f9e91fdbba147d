#include "tvq/smooth_fn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tvq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t piece_index(const SmoothFn::Piecewise& p, double t) {
  auto it = std::upper_bound(p.knots.begin(), p.knots.end(), t);
  if (it == p.knots.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - p.knots.begin()) - 1;
  return std::min(idx, p.coeffs.size() - 1);
}

// k-th derivative of sum_j c_j x^j at x.
double poly_deriv(const std::vector<double>& c, double x, int k) {
  double acc = 0.0;
  for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
    double factor = 1.0;
    for (int m = 0; m < k; ++m) factor *= static_cast<double>(j - m);
    acc = acc * x + factor * c[j];
  }
  return acc;
}

double eval(const SmoothFn::Piecewise& p, double t, int k) {
  const auto i = piece_index(p, t);
  return poly_deriv(p.coeffs[i], t - p.knots[i], k);
}

}  // namespace

SmoothFn::SmoothFn(Piecewise p) : repr_(Constant{}) {
  if (p.knots.size() < 2 || p.coeffs.size() + 1 != p.knots.size()) {
    throw std::invalid_argument("piecewise function needs k+1 knots for k pieces");
  }
  if (!std::is_sorted(p.knots.begin(), p.knots.end()) ||
      std::adjacent_find(p.knots.begin(), p.knots.end()) != p.knots.end()) {
    throw std::invalid_argument("piecewise knots must be strictly increasing");
  }
  for (const auto& c : p.coeffs) {
    if (c.empty()) throw std::invalid_argument("empty polynomial piece");
  }
  repr_ = std::move(p);
}

double SmoothFn::value(double t) const {
  return std::visit(
      overloaded{[](const Constant& f) { return f.c; },
                 [t](const Linear& f) { return f.a + f.b * t; },
                 [t](const Sinusoid& f) { return f.a + f.b * std::sin(f.c * t + f.d); },
                 [t](const Piecewise& f) { return eval(f, t, 0); }},
      repr_);
}

double SmoothFn::deriv(double t) const {
  return std::visit(
      overloaded{[](const Constant&) { return 0.0; },
                 [](const Linear& f) { return f.b; },
                 [t](const Sinusoid& f) { return f.b * f.c * std::cos(f.c * t + f.d); },
                 [t](const Piecewise& f) { return eval(f, t, 1); }},
      repr_);
}

double SmoothFn::deriv2(double t) const {
  return std::visit(
      overloaded{[](const Constant&) { return 0.0; },
                 [](const Linear&) { return 0.0; },
                 [t](const Sinusoid& f) {
                   return -f.b * f.c * f.c * std::sin(f.c * t + f.d);
                 },
                 [t](const Piecewise& f) { return eval(f, t, 2); }},
      repr_);
}

std::vector<double> SmoothFn::breakpoints() const {
  if (const auto* p = std::get_if<Piecewise>(&repr_)) {
    return {p->knots.begin() + 1, p->knots.end() - 1};
  }
  return {};
}

std::string SmoothFn::kind() const {
  return std::visit(overloaded{[](const Constant&) { return std::string("constant"); },
                               [](const Linear&) { return std::string("linear"); },
                               [](const Sinusoid&) { return std::string("sinusoid"); },
                               [](const Piecewise&) { return std::string("piecewise"); }},
                    repr_);
}

bool SmoothFn::is_zero() const {
  return std::visit(
      overloaded{[](const Constant& f) { return f.c == 0.0; },
                 [](const Linear& f) { return f.a == 0.0 && f.b == 0.0; },
                 [](const Sinusoid& f) { return f.a == 0.0 && f.b == 0.0; },
                 [](const Piecewise& f) {
                   return std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const auto& c) {
                     return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
                   });
                 }},
      repr_);
}

}  // namespace tvq
