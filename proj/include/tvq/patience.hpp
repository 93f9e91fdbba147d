#pragma once

#include <string>
#include <variant>
#include <vector>

#include "tvq/rng.hpp"

namespace tvq {

/// Patience-time distribution F with survival F^c, density f and hazard f/F^c.
///
/// The closed-form families are evaluated by their analytic formulas for
/// every real argument, including x < 0; the fluid solver relies on that
/// smooth continuation when it brackets the zero of the head-of-line wait.
/// Public callers should stay on x >= 0.
class PatienceDist {
 public:
  struct Exponential {
    double rate = 1.0;
  };
  /// f(x) = p*r1*exp(-r1 x) + (1-p)*r2*exp(-r2 x)
  struct HyperExp2 {
    double p = 0.5, rate1 = 1.0, rate2 = 1.0;
  };
  /// Tabulated cdf, interpolated by a monotone (Fritsch-Carlson) cubic so the
  /// density is continuous. Beyond the last knot the hazard stays constant.
  struct Tabulated {
    std::vector<double> x;
    std::vector<double> cdf;
    std::vector<double> slope;  // filled by the constructor
  };

  /// Throws std::invalid_argument on non-positive rates or p outside [0,1].
  explicit PatienceDist(Exponential e);
  explicit PatienceDist(HyperExp2 h);
  /// Requires x[0] == 0, cdf[0] == 0, strictly increasing x and cdf, cdf < 1.
  explicit PatienceDist(Tabulated t);

  static PatienceDist exponential(double rate) { return PatienceDist(Exponential{rate}); }
  static PatienceDist hyperexp2(double p, double rate1, double rate2) {
    return PatienceDist(HyperExp2{p, rate1, rate2});
  }
  static PatienceDist tabulated(std::vector<double> x, std::vector<double> cdf) {
    return PatienceDist(Tabulated{std::move(x), std::move(cdf), {}});
  }

  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double survival(double x) const;
  [[nodiscard]] double density(double x) const;
  /// f(x)/F^c(x). Throws NumericalError when F^c(x) underflows to 0 and
  /// std::domain_error for x < 0.
  [[nodiscard]] double hazard(double x) const;
  /// Hazard without the domain check; used inside integrators.
  [[nodiscard]] double hazard_unchecked(double x) const;

  [[nodiscard]] double mean() const;
  [[nodiscard]] double second_moment() const;
  [[nodiscard]] double scv() const;

  double sample(Rng& rng) const;

  [[nodiscard]] std::string kind() const;
  [[nodiscard]] const auto& repr() const { return repr_; }

 private:
  std::variant<Exponential, HyperExp2, Tabulated> repr_;
};

/// Balanced-means two-phase hyperexponential with the given mean and squared
/// coefficient of variation. scv == 1 degenerates to the exponential.
/// Throws std::invalid_argument("H2 requires scv >= 1") for scv < 1.
PatienceDist h2_from_scv(double mean, double scv);

/// Free-function form of PatienceDist::hazard.
inline double hazard(const PatienceDist& dist, double x) { return dist.hazard(x); }

}  // namespace tvq
