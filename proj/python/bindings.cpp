#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metrix/brackets.hpp"
#include "metrix/config.hpp"
#include "metrix/diagnostics.hpp"
#include "metrix/elliptic.hpp"
#include "metrix/experiment.hpp"
#include "metrix/functionals.hpp"
#include "metrix/operators.hpp"
#include "metrix/presets.hpp"

namespace py = pybind11;
using namespace metrix;

namespace {

ScalarField scalar_from_array(const GridSpec& g, py::array_t<double> arr) {
  auto buf = arr.request();
  if (static_cast<std::size_t>(buf.size) != g.size())
    throw std::invalid_argument("array length does not match grid size");
  ScalarField f(g);
  const double* p = static_cast<const double*>(buf.ptr);
  std::copy(p, p + g.size(), f.v.begin());
  return f;
}

py::array_t<double> array_from_scalar(const ScalarField& f) {
  py::array_t<double> out(f.v.size());
  std::copy(f.v.begin(), f.v.end(), out.mutable_data());
  return out;
}

py::dict summary_dict(const ExperimentResult& r) {
  py::dict d;
  for (const auto& [k, v] : r.summary) d[py::str(k)] = v;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "metric-bracket relaxation solvers";

  py::class_<GridSpec>(m, "GridSpec")
      .def_static("torus2d", &GridSpec::torus2d, py::arg("n"))
      .def_static("dirichlet_rect2d", &GridSpec::dirichlet_rect2d, py::arg("n1"),
                  py::arg("n2"), py::arg("lx") = 1.0, py::arg("ly") = 1.0)
      .def_static("gs_rect2d", &GridSpec::gs_rect2d, py::arg("nr"), py::arg("nz"),
                  py::arg("r0") = 1.0, py::arg("r1") = 7.0, py::arg("z0") = -9.5,
                  py::arg("z1") = 9.5)
      .def_static("periodic_line1d", &GridSpec::periodic_line1d, py::arg("n"))
      .def_static("torus3d", &GridSpec::torus3d, py::arg("n"))
      .def_property_readonly("dim", [](const GridSpec& g) { return g.dim; })
      .def_property_readonly("shape",
                             [](const GridSpec& g) {
                               py::tuple t(g.dim);
                               for (int a = 0; a < g.dim; ++a) t[a] = g.n[a];
                               return t;
                             })
      .def("size", &GridSpec::size)
      .def("spacing", &GridSpec::spacing, py::arg("axis"));

  m.def("integrate",
        [](const GridSpec& g, py::array_t<double> f, bool inverse_r) {
          const Measure mu = inverse_r ? Measure::inverse_r(g) : Measure::unit(g);
          return integrate(scalar_from_array(g, f), mu);
        },
        py::arg("grid"), py::arg("values"), py::arg("inverse_r") = false);

  m.def("gradient",
        [](const GridSpec& g, py::array_t<double> f) {
          const VectorField out = gradient(scalar_from_array(g, f));
          py::list comps;
          for (int c = 0; c < out.comps; ++c) {
            py::array_t<double> a(out.size());
            std::copy(out.comp(c), out.comp(c) + out.size(), a.mutable_data());
            comps.append(a);
          }
          return comps;
        },
        py::arg("grid"), py::arg("values"));

  m.def("poisson_periodic",
        [](const GridSpec& g, py::array_t<double> w) {
          return array_from_scalar(poisson_periodic(scalar_from_array(g, w)));
        },
        py::arg("grid"), py::arg("omega"));

  m.def("poisson_dirichlet",
        [](const GridSpec& g, py::array_t<double> w) {
          return array_from_scalar(poisson_dirichlet(scalar_from_array(g, w)));
        },
        py::arg("grid"), py::arg("omega"));

  m.def("gs_solve",
        [](const GridSpec& g, py::array_t<double> u, double tol) {
          return array_from_scalar(gs_solve(scalar_from_array(g, u), tol));
        },
        py::arg("grid"), py::arg("u"), py::arg("tol") = 1e-10);

  m.def("fit_exponential_rate",
        [](const std::vector<double>& t, const std::vector<double>& v, double floor) {
          const RateFit f = fit_exponential_rate(t, v, floor);
          return py::make_tuple(f.rate, f.window_begin, f.window_end, f.residual);
        },
        py::arg("times"), py::arg("values"), py::arg("floor") = 0.0);

  m.def("preset_names", [] {
    py::list names;
    for (const auto& p : preset_table()) names.append(p.name);
    return names;
  });
  m.def("preset_table_text", &format_preset_table);
  m.def("emit_config",
        [](const std::string& name) { return serialize_config(preset_config(name)); },
        py::arg("preset"));

  m.def("parse_config", [](const std::string& text) {
    const ParseResult r = parse_config(text);
    py::list errs;
    for (const auto& e : r.errors) errs.append(py::make_tuple(e.line, e.message));
    return py::make_tuple(r.ok(), errs);
  });

  m.def("run_preset",
        [](const std::string& name, py::dict overrides, bool artifacts,
           const std::string& out_dir) {
          ExperimentConfig cfg = preset_config(name);
          for (auto item : overrides) {
            const std::string key = py::cast<std::string>(item.first);
            if (key == "n") cfg.resolution = py::cast<int>(item.second);
            else if (key == "dt") cfg.run.dt = py::cast<double>(item.second);
            else if (key == "t_end") cfg.run.t_end = py::cast<double>(item.second);
            else if (key == "record_every") cfg.run.record_every = py::cast<int>(item.second);
            else throw std::invalid_argument("unknown override '" + key + "'");
          }
          if (!out_dir.empty()) cfg.out_dir = out_dir;
          const ExperimentResult r = run_experiment(cfg, artifacts);
          py::dict out = summary_dict(r);
          out["completed"] = !r.trajectory.failed;
          out["t_final"] = r.trajectory.final_time;
          return out;
        },
        py::arg("name"), py::arg("overrides") = py::dict(), py::arg("artifacts") = false,
        py::arg("out_dir") = "");
}
