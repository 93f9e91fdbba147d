#pragma once

#include <string>
#include <variant>
#include <vector>

namespace tvq {

/// Piecewise-smooth scalar function of time used for arrival rates and
/// staffing levels. Closed forms are analytic everywhere; piecewise
/// polynomials extend their first/last piece outside the breakpoint range.
class SmoothFn {
 public:
  struct Constant {
    double c = 0.0;
  };
  struct Linear {
    double a = 0.0;  // value at t = 0
    double b = 0.0;  // slope
  };
  /// a + b * sin(c * t + d)
  struct Sinusoid {
    double a = 0.0, b = 0.0, c = 1.0, d = 0.0;
  };
  /// Piece i is sum_k coeffs[i][k] * (t - knots[i])^k on [knots[i], knots[i+1]).
  struct Piecewise {
    std::vector<double> knots;
    std::vector<std::vector<double>> coeffs;
  };

  SmoothFn() : repr_(Constant{}) {}
  SmoothFn(Constant c) : repr_(c) {}
  SmoothFn(Linear l) : repr_(l) {}
  SmoothFn(Sinusoid s) : repr_(s) {}
  /// Throws std::invalid_argument when knots are unsorted or sizes mismatch.
  SmoothFn(Piecewise p);

  static SmoothFn constant(double c) { return SmoothFn(Constant{c}); }
  static SmoothFn linear(double a, double b) { return SmoothFn(Linear{a, b}); }
  static SmoothFn sinusoid(double a, double b, double c, double d) {
    return SmoothFn(Sinusoid{a, b, c, d});
  }

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double deriv(double t) const;
  [[nodiscard]] double deriv2(double t) const;

  /// Interior points where a derivative may jump (empty for closed forms).
  [[nodiscard]] std::vector<double> breakpoints() const;

  [[nodiscard]] std::string kind() const;
  [[nodiscard]] bool is_zero() const;

  [[nodiscard]] const auto& repr() const { return repr_; }

 private:
  std::variant<Constant, Linear, Sinusoid, Piecewise> repr_;
};

}  // namespace tvq
