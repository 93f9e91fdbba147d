#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tvq/approx.hpp"
#include "tvq/config.hpp"
#include "tvq/error.hpp"
#include "tvq/fluid.hpp"
#include "tvq/gaussian.hpp"
#include "tvq/sim.hpp"

namespace py = pybind11;
using namespace tvq;

namespace {

py::array_t<double> arr(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

template <class Stats>
py::dict stats_dict(const std::vector<Stats>& s) {
  std::vector<double> mean(s.size()), var(s.size()), se(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    mean[k] = s[k].count > 0 ? s[k].mean : std::nan("");
    var[k] = s[k].variance();
    se[k] = s[k].se();
  }
  py::dict d;
  d["mean"] = arr(mean);
  d["var"] = arr(var);
  d["se"] = arr(se);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fluid, Gaussian and simulation tools for G_t/M/s_t+GI queues";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<InfeasibleStaffingError>(m, "InfeasibleStaffingError", base.ptr());
  py::register_exception<CriticalLoadingError>(m, "CriticalLoadingError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_readwrite("mu", &ModelSpec::mu)
      .def_readwrite("c_lambda", &ModelSpec::c_lambda)
      .def_readwrite("horizon", &ModelSpec::horizon)
      .def_readwrite("x0", &ModelSpec::x0)
      .def_readwrite("var_x0", &ModelSpec::var_x0)
      .def("to_json", [](const ModelSpec& s) { return dump_model(s); })
      .def("violations", [](const ModelSpec& s) { return validate(s).violations; });

  m.def("parse_model", &parse_model, py::arg("json_text"));
  m.def("load_model", [](const std::string& path) { return load_model(path); }, py::arg("path"));
  m.def("sinusoidal_h2_example", &sinusoidal_h2_example);

  py::class_<FluidSolution>(m, "FluidSolution")
      .def_readonly("step", &FluidSolution::step)
      .def_readonly("switching_times", &FluidSolution::switching_times)
      .def_property_readonly("t", [](const FluidSolution& f) { return arr(f.t); })
      .def_property_readonly("X", [](const FluidSolution& f) { return arr(f.X); })
      .def_property_readonly("B", [](const FluidSolution& f) { return arr(f.B); })
      .def_property_readonly("Q", [](const FluidSolution& f) { return arr(f.Q); })
      .def_property_readonly("w", [](const FluidSolution& f) { return arr(f.w); })
      .def_property_readonly("wdot", [](const FluidSolution& f) { return arr(f.wdot); })
      .def_property_readonly("v", [](const FluidSolution& f) { return arr(f.v); })
      .def_property_readonly("alpha", [](const FluidSolution& f) { return arr(f.alpha); })
      .def_property_readonly("A", [](const FluidSolution& f) { return arr(f.A); })
      .def_property_readonly("D", [](const FluidSolution& f) { return arr(f.D); })
      .def_property_readonly("regimes", [](const FluidSolution& f) {
        std::vector<std::string> r;
        for (auto x : f.regime) r.emplace_back(regime_label(x));
        return r;
      });
  m.def("solve_fluid", &solve_fluid, py::arg("spec"), py::arg("step") = 1e-3);

  py::class_<GaussianSolution>(m, "GaussianSolution")
      .def_property_readonly("t", [](const GaussianSolution& g) { return arr(g.t); })
      .def_property_readonly("var_X", [](const GaussianSolution& g) { return arr(g.var_X); })
      .def_property_readonly("var_Xstar", [](const GaussianSolution& g) { return arr(g.var_Xstar); })
      .def_property_readonly("var_W", [](const GaussianSolution& g) { return arr(g.var_W); })
      .def_property_readonly("var_Wstar", [](const GaussianSolution& g) { return arr(g.var_Wstar); })
      .def_property_readonly("var_V", [](const GaussianSolution& g) { return arr(g.var_V); })
      .def_property_readonly("cov_XW", [](const GaussianSolution& g) { return arr(g.cov_XW); })
      .def_property_readonly("Fwc", [](const GaussianSolution& g) { return arr(g.Fwc); })
      .def_readonly("interval_var_x0", &GaussianSolution::interval_var_x0);
  m.def("propagate", [](const FluidSolution& f) { return propagate(f); }, py::arg("fluid"));

  m.def(
      "truncated_moments",
      [](double mean, double var, double a) {
        const auto t = truncated_moments(mean, var, a);
        return py::make_tuple(t.mean_pos, t.var_pos, t.mean_min, t.var_min);
      },
      py::arg("mean"), py::arg("var"), py::arg("a"));

  m.def(
      "report",
      [](double n, const FluidSolution& f, const GaussianSolution& g) {
        const auto r = report(n, f, g);
        py::dict d;
        d["t"] = arr(r.t);
        d["mean_X"] = arr(r.mean_X);
        d["var_X"] = arr(r.var_X);
        d["mean_Q"] = arr(r.mean_Q);
        d["var_Q"] = arr(r.var_Q);
        d["mean_B"] = arr(r.mean_B);
        d["var_B"] = arr(r.var_B);
        d["mean_W"] = arr(r.mean_W);
        d["var_W"] = arr(r.var_W);
        d["mean_V"] = arr(r.mean_V);
        d["var_V"] = arr(r.var_V);
        return d;
      },
      py::arg("n"), py::arg("fluid"), py::arg("gaussian"));

  m.def(
      "simulate",
      [](const ModelSpec& spec, double n, int reps, std::uint64_t seed, double grid_step,
         int parallel) {
        SimConfig c;
        c.spec = spec;
        c.n = n;
        c.reps = reps;
        c.seed = seed;
        c.grid_step = grid_step;
        c.parallel = parallel;
        SimEstimate e;
        {
          py::gil_scoped_release release;
          e = estimate(c);
        }
        py::dict d;
        d["t"] = arr(e.t);
        d["X"] = stats_dict(e.X);
        d["Q"] = stats_dict(e.Q);
        d["B"] = stats_dict(e.B);
        d["W"] = stats_dict(e.W);
        d["V"] = stats_dict(e.V);
        d["A"] = stats_dict(e.A);
        d["conserved"] = e.all_conserved;
        return d;
      },
      py::arg("spec"), py::arg("n"), py::arg("reps"), py::arg("seed") = 1,
      py::arg("grid_step") = 1e-2, py::arg("parallel") = 1);
}
