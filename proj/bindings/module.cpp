// Python bindings: lumped model, wall-loss coefficients, the benchmark
// session, and the BFGS driver on Python callables.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "cutplug/config.hpp"
#include "cutplug/driver.hpp"
#include "cutplug/helmholtz.hpp"
#include "cutplug/io.hpp"
#include "cutplug/lumped.hpp"
#include "cutplug/optimizer.hpp"

namespace py = pybind11;
using namespace cutplug;

namespace {

py::dict eval_to_dict(const EvalResult& r) {
  py::dict d;
  d["J"] = r.J;
  if (r.grad.size() > 0)
    d["grad"] = Eigen::VectorXd(r.grad);
  else
    d["grad"] = py::none();
  py::list f_hz, k, p_out, p_ideal;
  for (const FrequencyResponseRow& row : r.response.rows) {
    f_hz.append(row.f_hz);
    k.append(row.k);
    p_out.append(row.p_out);
    p_ideal.append(row.p_ideal);
  }
  d["f_hz"] = f_hz;
  d["k"] = k;
  d["p_out"] = p_out;
  d["p_ideal"] = p_ideal;
  d["power_residuals"] = r.power_residuals;
  d["n_perturbed_vertices"] = r.n_perturbed_vertices;
  return d;
}

py::dict bfgs_to_dict(const BfgsResult& r) {
  py::dict d;
  d["x"] = r.x;
  d["J"] = r.J;
  d["grad"] = r.grad;
  d["status"] = std::string(to_string(r.status));
  d["iterations"] = r.iterations;
  d["curvature_skips"] = r.curvature_skips;
  py::list hist;
  for (const BfgsIterate& it : r.history)
    hist.append(py::make_tuple(it.iter, it.J, it.grad_inf, it.step));
  d["history"] = hist;
  return d;
}

}  // namespace

PYBIND11_MODULE(cutplug, m) {
  m.doc() =
      "Level-set shape optimization of a compression-driver phase plug: "
      "cut-cell Helmholtz solves with viscothermal wall losses, adjoint "
      "shape gradients, and the lumped reference model.";
#ifdef CUTPLUG_VERSION
  m.attr("__version__") = CUTPLUG_VERSION;
#else
  m.attr("__version__") = "0.1.0";
#endif

  py::class_<LumpedParams>(m, "LumpedParams")
      .def(py::init<>())
      .def_readwrite("d", &LumpedParams::d)
      .def_readwrite("kappa", &LumpedParams::kappa)
      .def_readwrite("rho0", &LumpedParams::rho0)
      .def_readwrite("c0", &LumpedParams::c0)
      .def_readwrite("a_d", &LumpedParams::a_d)
      .def_readwrite("L", &LumpedParams::L);
  m.def("lumped_pressure", &lumped_pressure, py::arg("params"), py::arg("k"),
        "Chamber pressure of the single-degree-of-freedom driver model.");
  m.def("lumped_pressure_abs", &lumped_pressure_abs, py::arg("params"),
        py::arg("k"));
  m.def("ideal_outlet_target", &ideal_outlet_target, py::arg("params"),
        py::arg("k"),
        "Lumped pressure delayed by the axial propagation distance.");

  py::class_<PhysicsParams>(m, "PhysicsParams")
      .def(py::init<>())
      .def_readwrite("c0", &PhysicsParams::c0)
      .def_readwrite("rho0", &PhysicsParams::rho0)
      .def_readwrite("nu", &PhysicsParams::nu)
      .def_readwrite("prandtl", &PhysicsParams::prandtl)
      .def_readwrite("cp", &PhysicsParams::cp)
      .def_readwrite("gamma", &PhysicsParams::gamma)
      .def_readwrite("a_d", &PhysicsParams::a_d)
      .def_readwrite("losses", &PhysicsParams::losses);
  m.def(
      "boundary_layer_thicknesses",
      [](const PhysicsParams& p, double omega) {
        const BoundaryLayerThicknesses d = boundary_layer_thicknesses(p, omega);
        return py::make_tuple(d.delta_V, d.delta_T);
      },
      py::arg("physics"), py::arg("omega"),
      "(viscous, thermal) boundary-layer thickness at an angular frequency.");

  py::class_<GeometryParams>(m, "GeometryParams")
      .def(py::init<>())
      .def_readwrite("l_c", &GeometryParams::l_c)
      .def_readwrite("d", &GeometryParams::d)
      .def_readwrite("r_wg", &GeometryParams::r_wg)
      .def_readwrite("l_wg", &GeometryParams::l_wg)
      .def_readwrite("l_p", &GeometryParams::l_p)
      .def_readwrite("kappa", &GeometryParams::kappa)
      .def("slit_width", &GeometryParams::slit_width)
      .def("axial_length", &GeometryParams::axial_length);

  py::class_<FrequencyGrid>(m, "FrequencyGrid")
      .def(py::init<>())
      .def_readwrite("f_min_hz", &FrequencyGrid::f_min_hz)
      .def_readwrite("f_max_hz", &FrequencyGrid::f_max_hz)
      .def_readwrite("count", &FrequencyGrid::count)
      .def("frequencies_hz", &FrequencyGrid::frequencies_hz)
      .def("ratio", &FrequencyGrid::ratio);

  py::enum_<ObjectiveKind>(m, "ObjectiveKind")
      .value("Track", ObjectiveKind::Track)
      .value("Power", ObjectiveKind::Power);

  py::class_<OptimizationParams>(m, "OptimizationParams")
      .def(py::init<>())
      .def_readwrite("objective", &OptimizationParams::objective)
      .def_readwrite("tikhonov_eps", &OptimizationParams::tikhonov_eps)
      .def_readwrite("max_iters", &OptimizationParams::max_iters)
      .def_readwrite("grad_tol", &OptimizationParams::grad_tol);

  py::class_<Config>(m, "Config")
      .def(py::init<>())
      .def_readwrite("geometry", &Config::geometry)
      .def_readwrite("h", &Config::h)
      .def_readwrite("physics", &Config::physics)
      .def_readwrite("frequencies", &Config::frequencies)
      .def_readwrite("optimization", &Config::optimization)
      .def_readwrite("eps_s", &Config::eps_s);
  m.def(
      "parse_config_text",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in, "<python>");
      },
      py::arg("text"));
  m.def("parse_config_file", &parse_config_file, py::arg("path"));

  py::class_<Benchmark>(m, "Benchmark")
      .def(py::init([](const Config& cfg) {
             return std::make_unique<Benchmark>(cfg);
           }),
           py::arg("config"))
      .def_property_readonly("n_free",
                             [](const Benchmark& b) {
                               return b.poisson().n_free();
                             })
      .def_property_readonly("baseline",
                             [](const Benchmark& b) {
                               return DesignVector(b.baseline());
                             })
      .def(
          "evaluate",
          [](const Benchmark& b, const DesignVector& design,
             bool want_gradient, std::optional<bool> losses,
             std::optional<std::vector<double>> freqs_hz) {
            EvalOptions opts;
            opts.want_gradient = want_gradient;
            opts.losses = losses;
            opts.freqs_hz = std::move(freqs_hz);
            return eval_to_dict(b.evaluate(design, opts));
          },
          py::arg("design"), py::arg("want_gradient") = false,
          py::arg("losses") = py::none(), py::arg("freqs_hz") = py::none())
      .def(
          "sweep",
          [](const Benchmark& b, const DesignVector& design,
             const std::vector<double>& freqs_hz, std::optional<bool> losses) {
            const FrequencyResponse resp = b.sweep(design, freqs_hz, losses);
            py::list rows;
            for (const FrequencyResponseRow& r : resp.rows)
              rows.append(py::make_tuple(r.f_hz, r.k, r.p_out, r.p_ideal));
            return rows;
          },
          py::arg("design"), py::arg("freqs_hz"),
          py::arg("losses") = py::none())
      .def(
          "optimize",
          [](const Benchmark& b, const DesignVector& start) {
            const OptimizeOutcome out = b.optimize(start);
            py::dict d = bfgs_to_dict(out.bfgs);
            d["design"] = out.design;
            py::list p_out, f_hz;
            for (const FrequencyResponseRow& r : out.response.rows) {
              f_hz.append(r.f_hz);
              p_out.append(r.p_out);
            }
            d["f_hz"] = f_hz;
            d["p_out"] = p_out;
            return d;
          },
          py::arg("start"))
      .def(
          "grad_check",
          [](const Benchmark& b, const DesignVector& design, int n_components,
             unsigned seed) {
            py::list rows;
            for (const GradCheckRow& r :
                 b.grad_check(design, n_components, seed))
              rows.append(
                  py::make_tuple(r.component, r.adjoint, r.fd, r.rel_err));
            return rows;
          },
          py::arg("design"), py::arg("n_components") = 10,
          py::arg("seed") = 1);

  m.def(
      "bfgs_minimize",
      [](const py::function& objective, const Eigen::VectorXd& x0,
         int max_iters, double grad_tol) {
        BfgsOptions opts;
        opts.max_iters = max_iters;
        opts.grad_tol = grad_tol;
        Objective obj = [&objective](const Eigen::VectorXd& x,
                                     Eigen::VectorXd& grad) {
          py::tuple out = objective(x).cast<py::tuple>();
          grad = out[1].cast<Eigen::VectorXd>();
          return out[0].cast<double>();
        };
        return bfgs_to_dict(bfgs_minimize(obj, x0, opts));
      },
      py::arg("objective"), py::arg("x0"), py::arg("max_iters") = 100,
      py::arg("grad_tol") = 1e-8,
      "Minimize a Python callable returning (J, grad).");
}
