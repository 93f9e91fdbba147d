#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tvq/fluid.hpp"
#include "tvq/gaussian.hpp"
#include "tvq/sim.hpp"

namespace tvq {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitModel = 3,
  kExitInfeasible = 4,
  kExitAcceptance = 5,
};

struct CompareTolerances {
  double mean = 0.05;    // sup relative error of the mean of X
  double var = 0.25;     // variance ratio must lie in [1/(1+var), 1+var]
  double wait = 0.07;    // sup relative error of the means of W and V
  double window = 0.3;   // half-width excluded around each switching point
};

/// Error metrics of simulation against the fluid/Gaussian predictions on a
/// common grid. Points within `window` of a switching time (or of t = 0) are
/// excluded; W and V are checked at OL points only, and V additionally only
/// where t + v(t) stays outside the windows.
struct CompareMetrics {
  double sup_rel_mean_X = 0;
  double min_var_ratio = 0, max_var_ratio = 0;
  double sup_rel_W = 0, sup_rel_V = 0;
  std::size_t points_X = 0, points_W = 0, points_V = 0;
  bool pass_mean = false, pass_var = false, pass_W = false, pass_V = false;

  [[nodiscard]] bool pass() const { return pass_mean && pass_var && pass_W && pass_V; }
};

/// True when t lies within `window` of t = 0 or of a switching time.
bool near_switch(const FluidSolution& fluid, double t, double window);

CompareMetrics compare_metrics(const FluidSolution& fluid, const GaussianSolution& gauss,
                               const SimEstimate& sim, const CompareTolerances& tol,
                               std::ostream* csv = nullptr);

void write_summary(const CompareMetrics& m, const CompareTolerances& tol, const SimConfig& cfg,
                   const FluidSolution& fluid, std::ostream& os);

/// Entry point of the command-line tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace tvq
