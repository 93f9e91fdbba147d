#include "tvq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "tvq/approx.hpp"
#include "tvq/config.hpp"
#include "tvq/csv.hpp"
#include "tvq/error.hpp"

namespace tvq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string config;
  std::string out = ".";
  double grid_step = 1e-3;
  double n = 100;
  int reps = 100;
  std::uint64_t seed = 1;
  int parallel = 1;
  double tol_mean = 0.05;
  double tol_var = 0.25;
  double tol_wait = 0.07;
  bool write_path = false;
};

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const Options& o, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  std::ofstream os(std::filesystem::path(o.out) / name);
  if (!os) throw ConfigError("cannot write " + (std::filesystem::path(o.out) / name).string());
  return os;
}

SimConfig sim_config(const ModelSpec& spec, const Options& o) {
  SimConfig c;
  c.spec = spec;
  c.n = o.n;
  c.reps = o.reps;
  c.seed = o.seed;
  c.grid_step = o.grid_step;
  c.parallel = o.parallel;
  return c;
}

int cmd_fluid(const Options& o) {
  const auto fluid = solve_fluid(load_model(o.config), o.grid_step);
  auto os = open_out(o, "fluid.csv");
  write_fluid_csv(fluid, os);
  return kExitOk;
}

void write_switches_csv(const GaussianSolution& g, std::ostream& os) {
  CsvWriter csv(os, {"t", "from", "to", "var_X", "mean_Q", "var_Q", "mean_B", "var_B", "mean_V",
                     "var_V"});
  for (const auto& d : g.switches) {
    csv.cell(d.time).cell(regime_label(d.from)).cell(regime_label(d.to));
    for (double v : {d.var_X, d.mean_Q, d.var_Q, d.mean_B, d.var_B, d.mean_V, d.var_V}) csv.cell(v);
    csv.end_row();
  }
}

int cmd_variance(const Options& o) {
  const auto fluid = solve_fluid(load_model(o.config), o.grid_step);
  const auto g = propagate(fluid);
  auto os = open_out(o, "variance.csv");
  write_gaussian_csv(g, os);
  auto sw = open_out(o, "switches.csv");
  write_switches_csv(g, sw);
  return kExitOk;
}

int cmd_approx(const Options& o) {
  const auto fluid = solve_fluid(load_model(o.config), o.grid_step);
  const auto g = propagate(fluid);
  auto os = open_out(o, "approx.csv");
  write_report_csv(report(o.n, fluid, g), os);
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const ModelSpec spec = load_model(o.config);
  require_valid(spec);
  const SimConfig cfg = sim_config(spec, o);
  const auto e = estimate(cfg);
  auto os = open_out(o, "sim.csv");
  write_estimate_csv(e, os);
  if (o.write_path) {
    auto ps = open_out(o, "path.csv");
    write_path_csv(run_replication(cfg, 0), ps);
  }
  if (!e.all_conserved) {
    std::cerr << "error: flow conservation violated in a replication\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_compare(const Options& o) {
  const ModelSpec spec = load_model(o.config);
  const auto fluid = solve_fluid(spec, o.grid_step);
  const auto g = propagate(fluid);
  const SimConfig cfg = sim_config(spec, o);
  const auto e = estimate(cfg);
  CompareTolerances tol;
  tol.mean = o.tol_mean;
  tol.var = o.tol_var;
  tol.wait = o.tol_wait;
  auto os = open_out(o, "compare.csv");
  const auto m = compare_metrics(fluid, g, e, tol, &os);
  auto ss = open_out(o, "summary.txt");
  write_summary(m, tol, cfg, fluid, ss);
  write_summary(m, tol, cfg, fluid, std::cout);
  return m.pass() ? kExitOk : kExitAcceptance;
}

}  // namespace

bool near_switch(const FluidSolution& fluid, double t, double window) {
  if (std::abs(t) <= window) return true;
  return std::any_of(fluid.switching_times.begin(), fluid.switching_times.end(),
                     [&](double s) { return std::abs(t - s) <= window; });
}

CompareMetrics compare_metrics(const FluidSolution& fluid, const GaussianSolution& gauss,
                               const SimEstimate& sim, const CompareTolerances& tol,
                               std::ostream* csv_os) {
  if (sim.t.size() != fluid.size()) {
    throw std::invalid_argument("simulation and fluid grids differ");
  }
  const double n = sim.n;
  CompareMetrics m;
  m.min_var_ratio = std::numeric_limits<double>::infinity();
  m.max_var_ratio = 0.0;
  std::optional<CsvWriter> csv;
  if (csv_os) {
    csv.emplace(*csv_os, std::vector<std::string>{
                             "t", "regime", "excluded", "mean_X", "sim_mean_X", "se_X",
                             "rel_err_X", "var_X", "sim_var_X", "var_ratio", "w", "sim_W", "v",
                             "sim_V"});
  }
  for (std::size_t k = 0; k < fluid.size(); ++k) {
    const double t = fluid.t[k];
    const bool excluded = near_switch(fluid, t, tol.window);
    const double mean_x = n * fluid.X[k];
    const double var_x = n * gauss.var_X[k];
    const double sim_var = sim.X[k].variance();
    const double rel = std::abs(sim.X[k].mean - mean_x) / mean_x;
    const double ratio = sim_var / var_x;
    const bool ol = fluid.regime[k] == Regime::Overloaded;
    const double sim_v = sim.V[k].count > 0 ? sim.V[k].mean : kNaN;
    if (!excluded) {
      ++m.points_X;
      m.sup_rel_mean_X = std::max(m.sup_rel_mean_X, rel);
      m.min_var_ratio = std::min(m.min_var_ratio, ratio);
      m.max_var_ratio = std::max(m.max_var_ratio, ratio);
      if (ol) {
        ++m.points_W;
        m.sup_rel_W = std::max(m.sup_rel_W, std::abs(sim.W[k].mean - fluid.w[k]) / fluid.w[k]);
        const double v = fluid.v[k];
        if (!std::isnan(v) && !std::isnan(sim_v) && !near_switch(fluid, t + v, tol.window)) {
          ++m.points_V;
          m.sup_rel_V = std::max(m.sup_rel_V, std::abs(sim_v - v) / v);
        }
      }
    }
    if (csv) {
      csv->cell(t).cell(regime_label(fluid.regime[k])).cell(excluded ? "1" : "0");
      for (double x : {mean_x, sim.X[k].mean, sim.X[k].se(), rel, var_x, sim_var, ratio,
                       fluid.w[k], sim.W[k].mean, fluid.v[k], sim_v}) {
        csv->cell(x);
      }
      csv->end_row();
    }
  }
  m.pass_mean = m.points_X > 0 && m.sup_rel_mean_X <= tol.mean;
  m.pass_var = m.points_X > 0 && m.min_var_ratio >= 1.0 / (1.0 + tol.var) &&
               m.max_var_ratio <= 1.0 + tol.var;
  m.pass_W = m.sup_rel_W <= tol.wait;
  m.pass_V = m.sup_rel_V <= tol.wait;
  return m;
}

void write_summary(const CompareMetrics& m, const CompareTolerances& tol, const SimConfig& cfg,
                   const FluidSolution& fluid, std::ostream& os) {
  auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  os << "n = " << fmt(cfg.n) << ", reps = " << cfg.reps << ", seed = " << cfg.seed
     << ", grid step = " << fmt(cfg.grid_step) << ", excluded window = +-" << fmt(tol.window)
     << "\n";
  os << "switching times:";
  for (double s : fluid.switching_times) os << ' ' << fmt(s, "%.6f");
  os << "\n";
  os << "sup relative error of mean X: " << fmt(m.sup_rel_mean_X, "%.4f") << " (tol "
     << fmt(tol.mean) << ", " << m.points_X << " points) " << verdict(m.pass_mean) << "\n";
  os << "variance ratio sim / approx: [" << fmt(m.min_var_ratio, "%.4f") << ", "
     << fmt(m.max_var_ratio, "%.4f") << "] (allowed [" << fmt(1.0 / (1.0 + tol.var), "%.4f")
     << ", " << fmt(1.0 + tol.var, "%.4f") << "]) " << verdict(m.pass_var) << "\n";
  os << "sup relative error of mean W: " << fmt(m.sup_rel_W, "%.4f") << " (tol " << fmt(tol.wait)
     << ", " << m.points_W << " points) " << verdict(m.pass_W) << "\n";
  os << "sup relative error of mean V: " << fmt(m.sup_rel_V, "%.4f") << " (tol " << fmt(tol.wait)
     << ", " << m.points_V << " points) " << verdict(m.pass_V) << "\n";
  os << "overall: " << verdict(m.pass()) << "\n";
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Fluid and Gaussian approximations for many-server queues with time-varying "
               "arrivals, staffing and abandonment"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "model JSON file")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--grid-step", o.grid_step, "grid step (must divide the horizon)")
        ->check(CLI::PositiveNumber);
  };
  auto add_scale = [&](CLI::App* sub) {
    sub->add_option("--n", o.n, "scale n")->check(CLI::Range(1.0, 1e9));
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--reps", o.reps, "replications")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "base seed");
    sub->add_option("--parallel", o.parallel, "concurrent replications")->check(CLI::PositiveNumber);
  };
  auto* fluid = app.add_subcommand("fluid", "fluid model on the grid -> fluid.csv");
  add_common(fluid);
  auto* variance = app.add_subcommand("variance", "Gaussian variances -> variance.csv, switches.csv");
  add_common(variance);
  auto* approx = app.add_subcommand("approx", "finite-n predictions -> approx.csv");
  add_common(approx);
  add_scale(approx);
  auto* simulate = app.add_subcommand("simulate", "discrete-event simulation -> sim.csv");
  add_common(simulate);
  add_scale(simulate);
  add_sim(simulate);
  simulate->add_flag("--write-path", o.write_path, "also write replication 0 to path.csv");
  auto* compare = app.add_subcommand("compare", "simulation vs approximation -> compare.csv, summary.txt");
  add_common(compare);
  add_scale(compare);
  add_sim(compare);
  compare->add_option("--tol-mean", o.tol_mean, "sup relative error allowed for mean X");
  compare->add_option("--tol-var", o.tol_var, "variance ratio allowed in [1/(1+tol), 1+tol]");
  compare->add_option("--tol-wait", o.tol_wait, "sup relative error allowed for mean W and V");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*fluid) return cmd_fluid(o);
    if (*variance) return cmd_variance(o);
    if (*approx) return cmd_approx(o);
    if (*simulate) return cmd_simulate(o);
    return cmd_compare(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ModelError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitModel;
  } catch (const CriticalLoadingError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kExitModel;
  } catch (const InfeasibleStaffingError& e) {
    std::cerr << "infeasible staffing: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace tvq
