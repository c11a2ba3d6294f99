#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdirac/discrete.hpp"
#include "gdirac/form.hpp"
#include "gdirac/io.hpp"
#include "gdirac/model.hpp"
#include "gdirac/spectral.hpp"

namespace py = pybind11;
using namespace gdirac;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dirac operators with Kirchhoff-type vertex conditions on metric graphs";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const NumericError& e) {
      py::set_error(numeric_error, e.what());
    }
  });

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init([](double mass, double c) { return PhysicalParams{mass, c}; }), py::arg("mass") = 0.5,
           py::arg("c") = 1.0)
      .def_readwrite("mass", &PhysicalParams::mass)
      .def_readwrite("c", &PhysicalParams::light_speed)
      .def_property_readonly("threshold", &PhysicalParams::threshold);

  py::class_<MetricGraph>(m, "MetricGraph")
      .def_property_readonly("vertices", &MetricGraph::vertices)
      .def_property_readonly("edge_ids", [](const MetricGraph& g) {
        std::vector<std::string> ids;
        for (const auto& e : g.edges()) ids.push_back(e.id);
        return ids;
      })
      .def_property_readonly("segment_count", &MetricGraph::segment_count)
      .def_property_readonly("halfline_count", &MetricGraph::halfline_count)
      .def_property_readonly("is_compact", &MetricGraph::is_compact)
      .def("degree", &MetricGraph::degree);

  py::class_<GraphDocument>(m, "GraphDocument")
      .def_readonly("graph", &GraphDocument::graph)
      .def_readonly("params", &GraphDocument::params)
      .def("to_json", [](const GraphDocument& d) { return to_json(d); });

  py::class_<ConditionMatrices>(m, "ConditionMatrices")
      .def_readonly("A", &ConditionMatrices::A)
      .def_readonly("B", &ConditionMatrices::B);

  m.def("parse_graph", [](const std::string& text) { return parse_graph(text); });
  m.def("load_graph", &load_graph);
  m.def("builtin_model", [](cplx a, cplx b) { return builtin_model(a, b); }, py::arg("a") = 0.0, py::arg("b") = 1.0);
  m.def("model_matrices", &model_condition_matrices, py::arg("a") = 0.0, py::arg("b") = 1.0);
  m.def("assemble_AB", [](const GraphDocument& d) { return assemble_AB(d.graph, d.params); });
  m.def("trace_dimension", [](const GraphDocument& d) { return trace_dimension(d.graph); });
  m.def("check_selfadjoint", [](const ConditionMatrices& cm) {
    const auto r = check_selfadjoint_conditions(cm);
    py::dict out;
    out["hermitian_compat"] = r.hermitian_compat;
    out["hermitian_residual"] = r.hermitian_residual;
    out["rank_full"] = r.rank_full;
    out["rank"] = r.rank;
    return out;
  });

  m.def("weyl_matrix", [](const GraphDocument& d, cplx z) { return assemble_M(d.graph, d.params, z); });
  m.def("secular", [](const GraphDocument& d, const ConditionMatrices& cm, cplx z) {
    return secular(d.graph, cm, d.params, z);
  });
  m.def("secular_regularized", [](const GraphDocument& d, const ConditionMatrices& cm, cplx z) {
    return secular_regularized(d.graph, cm, d.params, z);
  });
  m.def("model_f", &model_f);
  m.def("model_f_raw", &model_f_raw);
  m.def("secular_csv",
        [](const GraphDocument& d, const ConditionMatrices& cm, double zmin, double zmax, int samples) {
          return secular_csv(secular_scan(d.graph, cm, d.params, zmin, zmax, samples));
        });

  m.def("segment_spectrum", [](double length, const PhysicalParams& p, int j_max) {
    const auto s = segment_spectrum(length, p, j_max);
    py::dict out;
    out["positive"] = s.positive;
    out["negative"] = s.negative;
    out["max_shooting_deviation"] = s.max_shooting_deviation;
    return out;
  });
  m.def("spectral_report_json", [](const GraphDocument& d, const ConditionMatrices& cm, int samples, int j_max) {
    return to_json(spectral_report(d.graph, cm, d.params, samples, j_max), d.graph);
  }, py::arg("doc"), py::arg("cm"), py::arg("samples") = 2001, py::arg("j_max") = 3);

  m.def("discrete_eigenvalues",
        [](const GraphDocument& d, double h, double lo, double hi, double L) {
          const auto op = discretize(d.graph, d.params, h, L);
          return eigs_window(op, lo, hi).eigenvalues;
        },
        py::arg("doc"), py::arg("h"), py::arg("lo"), py::arg("hi"), py::arg("L") = 0.0);
  m.def("discrete_symmetry_residual", [](const GraphDocument& d, double h, double L) {
    return symmetry_residual(d.graph, d.params, h, L);
  }, py::arg("doc"), py::arg("h"), py::arg("L") = 0.0);

  m.def("interpolation_ratio", [](const std::vector<double>& weights, const Eigen::VectorXcd& x, double theta) {
    const auto s = MultiplierSurrogate::from_weights(weights);
    return interpolation_norm(s, x, theta) / power_norm(s, x, theta);
  });
  m.def("interpolation_constant", &interpolation_constant);
}
