#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "harmzero/io.hpp"

namespace py = pybind11;
using namespace harmzero;

namespace {

SolveOptions make_options(std::optional<double> theta) {
  SolveOptions o;
  o.theta = theta;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Zeros and preimages of harmonic mappings by transport of images";

  static py::exception<Error> error(m, "HarmzeroError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error.ptr())(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<HarmonicMapping>(m, "Mapping")
      .def_static("wilmshurst", &wilmshurst, py::arg("n"))
      .def_static("mpw", &mpw, py::arg("n"), py::arg("rho"))
      .def_static("rhie", &rhie, py::arg("n"), py::arg("rho"), py::arg("eps"))
      .def_static("log_example", &log_example)
      .def_static("chang_refsdal", &chang_refsdal)
      .def_static("from_json", &mapping_from_json, py::arg("text"))
      .def_static("load", &load_mapping_file, py::arg("path"))
      .def("to_json", &mapping_to_json)
      .def("__call__", &HarmonicMapping::eval, py::arg("z"))
      .def("jacobian", &HarmonicMapping::jacobian, py::arg("z"))
      .def_property_readonly("pole_order", &HarmonicMapping::total_pole_order);

  py::class_<SolveReport>(m, "Report")
      .def_readonly("target", &SolveReport::target)
      .def_readonly("zeros", &SolveReport::zeros)
      .def_readonly("residuals", &SolveReport::residuals)
      .def_readonly("jacobians", &SolveReport::jacobians)
      .def_readonly("newton_iterations", &SolveReport::newton_iterations)
      .def_readonly("steps", &SolveReport::steps)
      .def_readonly("refinements", &SolveReport::refinements)
      .def_readonly("restarts", &SolveReport::restarts)
      .def_readonly("theta", &SolveReport::theta)
      .def_readonly("seed", &SolveReport::seed)
      .def_readonly("pole_order", &SolveReport::pole_order)
      .def_readonly("winding_sum", &SolveReport::winding_sum)
      .def_readonly("expected_count", &SolveReport::expected_count)
      .def_property_readonly("max_residual", &SolveReport::max_residual)
      .def("to_json", &report_to_json, py::arg("deterministic") = true)
      .def("__len__", [](const SolveReport& r) { return r.zeros.size(); });

  m.def(
      "solve_all_zeros",
      [](const HarmonicMapping& f, std::uint64_t seed, std::optional<double> theta) {
        return solve_all_zeros(f, seed, make_options(theta));
      },
      py::arg("f"), py::arg("seed") = 1, py::arg("theta") = py::none(), py::call_guard<py::gil_scoped_release>());

  m.def(
      "solve_preimages",
      [](const HarmonicMapping& f, Complex eta, std::uint64_t seed, std::optional<double> theta) {
        return solve_preimages(f, eta, seed, make_options(theta));
      },
      py::arg("f"), py::arg("eta"), py::arg("seed") = 1, py::arg("theta") = py::none(),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "caustics",
      [](const HarmonicMapping& f) {
        std::vector<std::vector<Complex>> out;
        for (const auto& c : compute_critical_data(f).caustics) out.push_back(c.points);
        return out;
      },
      py::arg("f"), "Sampled caustic curves, one list of points per critical curve.");

  m.def("rho_critical", &rho_critical, py::arg("n"));
}
