#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tvq/approx.hpp"
#include "tvq/fluid.hpp"
#include "tvq/gaussian.hpp"
#include "tvq/quadrature.hpp"
#include "tvq/sim.hpp"

using namespace tvq;

namespace {

ModelSpec erlang_a(double lambda, double theta, double horizon) {
  ModelSpec s;
  s.lambda = SmoothFn::constant(lambda);
  s.staffing = SmoothFn::constant(1.0);
  s.patience = PatienceDist::exponential(theta);
  s.horizon = horizon;
  return s;
}

// Stationary mean and variance of the Erlang-A birth-death chain with N servers.
std::pair<double, double> erlang_a_moments(double lambda, double mu, double theta, int N) {
  std::vector<double> p{1.0};
  for (int k = 1; k < 2000; ++k) {
    const double death = std::min(k, N) * mu + std::max(k - N, 0) * theta;
    p.push_back(p.back() * lambda / death);
    if (p.back() < 1e-300) break;
  }
  double z = 0, m = 0, m2 = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    z += p[k];
    m += k * p[k];
    m2 += double(k) * k * p[k];
  }
  m /= z;
  return {m, m2 / z - m * m};
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI); }

}  // namespace

TEST_CASE("truncated normal moments against quadrature") {
  for (auto [m, var, a] : {std::tuple{0.0, 1.0, 0.0}, {1.3, 0.4, 0.5}, {-2.0, 2.5, 1.0}}) {
    const double sd = std::sqrt(var);
    // Split at the kink y = a so each piece is smooth.
    const double kink = (a - m) / sd;
    auto E = [&](auto g) {
      auto f = [&](double z) { return g(m + sd * z) * normal_pdf(z); };
      return quad::integrate(f, -12, kink, 96, 8) + quad::integrate(f, kink, 12, 96, 8);
    };
    const auto tm = truncated_moments(m, var, a);
    const double pos1 = E([&](double y) { return std::max(y - a, 0.0); });
    const double pos2 = E([&](double y) { return std::pow(std::max(y - a, 0.0), 2); });
    const double min1 = E([&](double y) { return std::min(y, a); });
    const double min2 = E([&](double y) { return std::pow(std::min(y, a), 2); });
    CHECK(tm.mean_pos == doctest::Approx(pos1).epsilon(1e-6));
    CHECK(tm.var_pos == doctest::Approx(pos2 - pos1 * pos1).epsilon(1e-6));
    CHECK(tm.mean_min == doctest::Approx(min1).epsilon(1e-6));
    CHECK(tm.var_min == doctest::Approx(min2 - min1 * min1).epsilon(1e-6));
    CHECK(tm.mean_pos + tm.mean_min == doctest::Approx(m));
  }
  const auto point = truncated_moments(3.0, 0.0, 1.0);
  CHECK(point.mean_pos == 2.0);
  CHECK(point.var_pos == 0.0);
  CHECK(point.mean_min == 1.0);
}

TEST_CASE("performance report splits X into queue and service") {
  const auto f = solve_fluid(sinusoidal_h2_example(), 1e-2);
  const auto g = propagate(f);
  const auto r = report(200, f, g);
  for (std::size_t k = 0; k < r.t.size(); k += 13) {
    CHECK(r.mean_Q[k] + r.mean_B[k] == doctest::Approx(r.mean_X[k]).epsilon(1e-10));
    CHECK(r.staff[k] == 200);
    CHECK(r.mean_X[k] == doctest::Approx(200 * f.X[k]).epsilon(1e-12));
    if (!r.wait_limit[k]) CHECK(r.var_W[k] == 0.0);
  }
}

TEST_CASE("no arrivals means an empty system") {
  SimConfig cfg;
  cfg.spec = erlang_a(0.0, 1.0, 3.0);
  cfg.n = 50;
  const auto p = run_replication(cfg, 0);
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    CHECK(p.X[k] == 0);
    CHECK(p.W[k] == 0.0);
  }
  CHECK(p.final_N == 0);
}

TEST_CASE("thinned arrival counts are Poisson with mean n Lambda") {
  const ModelSpec s = sinusoidal_h2_example();
  const double n = 10, T = 4;
  const double Lambda = T + 0.6 * (1 - std::cos(T));
  RunningStats c;
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    Rng rng(seed);
    const auto a = gen_arrivals(s, n, T, rng);
    CHECK(std::is_sorted(a.begin(), a.end()));
    c.add(static_cast<double>(a.size()));
  }
  CHECK(std::abs(c.mean - n * Lambda) < 4 * c.se());
  CHECK(c.variance() / (n * Lambda) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("staffing changes track ceil(n s(t))") {
  ModelSpec s = sinusoidal_h2_example();
  s.staffing = SmoothFn::sinusoid(1.0, 0.2, 1.0, 0.5);
  const double n = 37;
  const auto ch = staffing_changes(s, n, 16.0);
  REQUIRE(ch.size() > 10);
  double prev = 0;
  long level = staffing_level(s, n, 0.0);
  for (const auto& c : ch) {
    const double mid = 0.5 * (prev + c.time);
    CHECK(staffing_level(s, n, mid) == level);
    CHECK(c.level != level);
    CHECK(c.level == staffing_level(s, n, c.time + 1e-9));
    prev = c.time;
    level = c.level;
  }
}

TEST_CASE("conservation, forced removals and determinism") {
  ModelSpec s = sinusoidal_h2_example();
  s.staffing = SmoothFn::sinusoid(1.0, 0.2, 1.0, 0.5);
  SimConfig cfg;
  cfg.spec = s;
  cfg.n = 60;
  long forced = 0;
  for (int r = 0; r < 20; ++r) {
    const auto p = run_replication(cfg, r);
    CHECK(p.conserved());
    for (std::size_t k = 0; k < p.t.size(); ++k) {
      CHECK(p.Q[k] + p.B[k] == p.X[k]);
      CHECK(p.B[k] <= staffing_level(s, cfg.n, p.t[k]));
      if (p.Q[k] > 0) CHECK(p.B[k] == staffing_level(s, cfg.n, p.t[k]));
    }
    forced += p.final_forced;
  }
  CHECK(forced > 0);
  std::ostringstream a, b;
  write_path_csv(run_replication(cfg, 4), a);
  write_path_csv(run_replication(cfg, 4), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("running statistics merge in any split") {
  std::vector<double> x;
  Rng rng(3);
  for (int i = 0; i < 1001; ++i) x.push_back(1e6 + rng.normal());
  RunningStats all, left, right;
  for (std::size_t i = 0; i < x.size(); ++i) {
    all.add(x[i]);
    (i < 317 ? left : right).add(x[i]);
  }
  left.merge(right);
  double mean = 0;
  for (double v : x) mean += v;
  mean /= x.size();
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  CHECK(all.mean == doctest::Approx(mean).epsilon(1e-14));
  CHECK(all.variance() == doctest::Approx(ss / (x.size() - 1)).epsilon(1e-9));
  CHECK(left.variance() == doctest::Approx(all.variance()).epsilon(1e-9));
  CHECK(left.count == all.count);
  CHECK(std::isnan(RunningStats{}.variance()));
}

TEST_CASE("estimates do not depend on the thread count") {
  SimConfig cfg;
  cfg.spec = sinusoidal_h2_example();
  cfg.spec.horizon = 4.0;
  cfg.n = 30;
  cfg.reps = 12;
  cfg.parallel = 1;
  const auto a = estimate(cfg);
  cfg.parallel = 5;
  const auto b = estimate(cfg);
  REQUIRE(a.X.size() == b.X.size());
  for (std::size_t k = 0; k < a.X.size(); ++k) {
    CHECK(a.X[k].mean == b.X[k].mean);
    CHECK(a.X[k].m2 == b.X[k].m2);
  }
  CHECK(a.all_conserved);
}

TEST_CASE("Erlang-A simulation against the birth-death stationary law") {
  // With theta = mu the system is infinite-server: Poisson, var / mean = 1.
  for (double theta : {1.0, 0.4}) {
    SimConfig cfg;
    cfg.spec = erlang_a(1.2, theta, 12.0);
    cfg.n = 20;
    cfg.reps = 400;
    cfg.grid_step = 0.5;
    cfg.seed = 5;
    const auto e = estimate(cfg);
    const auto& last = e.X.back();
    const auto [m, v] = erlang_a_moments(24.0, 1.0, theta, 20);
    CHECK(std::abs(last.mean - m) < 4 * last.se());
    CHECK(last.variance() / v == doctest::Approx(1.0).epsilon(0.2));
    if (theta == 1.0) CHECK(m == doctest::Approx(24.0).epsilon(1e-9));
  }
}
