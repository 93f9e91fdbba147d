#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "tvq/config.hpp"
#include "tvq/error.hpp"
#include "tvq/model.hpp"
#include "tvq/patience.hpp"
#include "tvq/quadrature.hpp"
#include "tvq/smooth_fn.hpp"

using namespace tvq;

namespace {

// Central differences as an independent check of analytic derivatives.
double num_deriv(const std::function<double(double)>& f, double t, double h = 1e-5) {
  return (f(t + h) - f(t - h)) / (2 * h);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("smooth functions: values and derivatives") {
  const SmoothFn s = SmoothFn::sinusoid(1, 0.6, 2, 0.3);
  for (double t : {0.0, 0.7, 3.1}) {
    CHECK(s.value(t) == doctest::Approx(1 + 0.6 * std::sin(2 * t + 0.3)).epsilon(1e-14));
    CHECK(s.deriv(t) == doctest::Approx(num_deriv([&](double x) { return s.value(x); }, t)).epsilon(1e-8));
    CHECK(s.deriv2(t) == doctest::Approx(num_deriv([&](double x) { return s.deriv(x); }, t)).epsilon(1e-8));
  }
  CHECK(SmoothFn::linear(2, -0.5).value(3) == doctest::Approx(0.5));
  CHECK(SmoothFn::constant(0).is_zero());
  CHECK_FALSE(SmoothFn::constant(1).is_zero());
}

TEST_CASE("piecewise polynomial continuity and errors") {
  // t^2 on [0, 1), then 1 + 2(t - 1) on [1, 2]: C1 at the knot.
  const SmoothFn p(SmoothFn::Piecewise{{0, 1, 2}, {{0, 0, 1}, {1, 2}}});
  CHECK(p.value(0.5) == doctest::Approx(0.25));
  CHECK(p.value(1.0) == doctest::Approx(1.0));
  CHECK(p.deriv(1.0) == doctest::Approx(2.0));
  CHECK(p.value(1.0 - 1e-12) == doctest::Approx(p.value(1.0)));
  CHECK(p.breakpoints() == std::vector<double>{1.0});
  CHECK_THROWS_AS(SmoothFn(SmoothFn::Piecewise{{1, 0}, {{1}}}), std::invalid_argument);
}

TEST_CASE("H2 from mean and scv") {
  const PatienceDist d = h2_from_scv(2.0, 4.0);
  CHECK(d.mean() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(d.scv() == doctest::Approx(4.0).epsilon(1e-12));
  // Mean from the survival function by quadrature.
  const double m = quad::integrate([&](double x) { return d.survival(x); }, 0.0, 200.0, 400, 8);
  CHECK(m == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(h2_from_scv(1.0, 0.5), std::invalid_argument);
  CHECK(h2_from_scv(1.5, 1.0).scv() == doctest::Approx(1.0));
}

TEST_CASE("patience hazard equals density over survival") {
  for (const PatienceDist& d : {PatienceDist::exponential(0.5), h2_from_scv(2.0, 4.0),
                                PatienceDist::tabulated({0, 1, 2, 4}, {0, 0.3, 0.5, 0.7})}) {
    for (double x : {0.0, 0.3, 1.7, 3.0}) {
      CHECK(d.hazard(x) == doctest::Approx(d.density(x) / d.survival(x)).epsilon(1e-12));
      CHECK(d.density(x) ==
            doctest::Approx(num_deriv([&](double y) { return d.cdf(y); }, x + 1e-4)).epsilon(1e-3));
      CHECK(d.cdf(x) + d.survival(x) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS((void)d.hazard(-1.0), std::domain_error);
  }
  CHECK(PatienceDist::exponential(0.5).hazard(7.0) == doctest::Approx(0.5));
}

TEST_CASE("patience sampling matches the mean") {
  const PatienceDist d = h2_from_scv(2.0, 4.0);
  Rng rng(11);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += d.sample(rng);
  // sd of the sample mean is sqrt(scv) * mean / sqrt(n) = 0.009
  CHECK(std::abs(sum / n - 2.0) < 0.04);
}

TEST_CASE("Gauss-Legendre exactness and composite accuracy") {
  for (int order : {2, 4, 8}) {
    const auto& r = quad::gauss_legendre(order);
    double w = 0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for polynomials of degree 2n - 1.
    const int deg = 2 * order - 1;
    const double got = quad::integrate([&](double x) { return std::pow(x, deg - 1); }, 0.0, 1.0, 1, order);
    CHECK(got == doctest::Approx(1.0 / deg).epsilon(1e-13));
  }
  CHECK(quad::integrate([](double x) { return std::exp(x); }, 0.0, 2.0) ==
        doctest::Approx(std::exp(2.0) - 1).epsilon(1e-13));
}

TEST_CASE("cumulative trapezoid and interpolation") {
  std::vector<double> x{0, 0.5, 1.5, 2}, y{0, 1, 3, 4};  // y = 2x
  const auto c = quad::cumulative_trapezoid(x, y);
  CHECK(c.front() == 0.0);
  CHECK(c.back() == doctest::Approx(4.0));
  CHECK(quad::interp_linear(x, y, 1.0) == doctest::Approx(2.0));
  CHECK(quad::interp_linear(x, y, 9.0) == doctest::Approx(4.0));
  std::vector<double> cube, slope;
  for (double t : x) {
    cube.push_back(t * t * t);
    slope.push_back(3 * t * t);
  }
  CHECK(quad::interp_hermite(x, cube, slope, 1.1) == doctest::Approx(1.331).epsilon(1e-13));
  CHECK(quad::locate(x, 0.5) == 1);
  CHECK(quad::locate(x, 2.0) == 2);
}

TEST_CASE("model validation lists violated assumptions") {
  ModelSpec s = sinusoidal_h2_example();
  CHECK(validate(s).ok());
  s.lambda = SmoothFn::constant(0.0);
  s.mu = -1;
  s.x0 = 2.0;
  const auto r = validate(s);
  CHECK_FALSE(r.ok());
  CHECK(r.summary().find("λ_inf > 0 fails") != std::string::npos);
  CHECK(r.summary().find("mu > 0 fails") != std::string::npos);
  CHECK(r.summary().find("X(0) ≤ s(0) fails") != std::string::npos);
  CHECK_THROWS_AS(require_valid(s), ModelError);
}

TEST_CASE("config round trip and errors") {
  const std::string dir = TVQ_SOURCE_DIR;
  const ModelSpec s = load_model(dir + "/configs/h2_sinusoid.json");
  CHECK(s.horizon == 16.0);
  CHECK(s.patience.mean() == doctest::Approx(2.0));
  const ModelSpec again = parse_model(dump_model(s));
  for (double t : {0.0, 3.3, 12.0}) {
    CHECK(again.lambda.value(t) == s.lambda.value(t));
    CHECK(again.patience.survival(t) == doctest::Approx(s.patience.survival(t)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(parse_model(read_file(dir + "/tests/data/malformed.json")), ConfigError);
  CHECK_THROWS_AS(load_model(dir + "/no/such/file.json"), ConfigError);
  CHECK_THROWS_AS(parse_model(R"({"lambda": {"kind": "cubic"}, "staffing": 1})"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_model(R"({"lambda": {"kind": "constant", "params": {"value": 1}},
                      "staffing": {"kind": "constant", "params": {"value": 1}},
                      "mu": 1, "horizon": 2,
                      "patience": {"kind": "weibull", "params": {}}})"),
      doctest::Contains("patience"), ConfigError);
}
