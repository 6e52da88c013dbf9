#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "solitonjet/error.hpp"
#include "solitonjet/field.hpp"
#include "solitonjet/parser.hpp"
#include "solitonjet/profile.hpp"
#include "solitonjet/scenario.hpp"
#include "solitonjet/solitons.hpp"

namespace py = pybind11;
namespace sj = solitonjet;

namespace {

sj::Family family_from(const std::string& name) {
  if (name == "akns") return sj::Family::Akns;
  if (name == "nlbq") return sj::Family::Nlbq;
  throw sj::Error(sj::ErrorKind::InvalidArgument, "unknown family '" + name + "' (expected akns or nlbq)");
}

py::dict report_dict(const sj::ResidualReport& r) {
  py::object loads = py::module_::import("json").attr("loads");
  return loads(sj::report_to_json(r).dump());
}

py::array_t<double> grid_array(const sj::GridOutput& g) {
  py::array_t<double> out({g.grid.n_a, g.grid.n_b});
  auto view = out.mutable_unchecked<2>();
  for (int i = 0; i < g.grid.n_a; ++i) {
    for (int j = 0; j < g.grid.n_b; ++j) view(i, j) = g.values[static_cast<std::size_t>(i) * g.grid.n_b + j];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jet-based field evaluation and soliton residual checks";

  static py::exception<sj::Error> error(m, "SolitonJetError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const sj::Error& e) {
      const std::string message = std::string(sj::to_string(e.kind())) + ": " + e.what();
      PyErr_SetString(error.ptr(), message.c_str());
    }
  });

  py::class_<sj::FieldExpr>(m, "Field")
      .def(py::init(&sj::parse_field), py::arg("text"))
      .def("value", [](const sj::FieldExpr& f, double a, double b) { return sj::value_at(f, {a, b}); })
      .def(
          "partial",
          [](const sj::FieldExpr& f, double a, double b, int i, int k) {
            return sj::evaluate(f, {a, b}, i, k).partial(i, k);
          },
          py::arg("a"), py::arg("b"), py::arg("i"), py::arg("k"))
      .def("tree", [](const sj::FieldExpr& f) { return sj::tree_string(f); })
      .def("node_count", [](const sj::FieldExpr& f) { return sj::node_count(f); })
      .def("__str__", [](const sj::FieldExpr& f) { return sj::to_string(f); })
      .def("__repr__", [](const sj::FieldExpr& f) { return "Field('" + sj::to_string(f) + "')"; });

  m.def(
      "soliton_grid",
      [](const std::string& family, const std::vector<std::string>& modes, double a0, const std::string& grid,
         const std::string& field, int threads) {
        sj::SolitonSpec spec{family_from(family), a0, {}};
        for (const auto& text : modes) spec.modes.push_back(sj::parse_mode(text));
        const sj::ProfileField which = field == "Mx" ? sj::ProfileField::Mx : sj::ProfileField::M;
        if (field != "M" && field != "Mx") {
          throw sj::Error(sj::ErrorKind::InvalidArgument, "field must be M or Mx");
        }
        const sj::GridSpec g = grid.empty() ? sj::GridSpec{} : sj::parse_grid_spec(grid);
        return grid_array(sj::sample_grid(sj::soliton_field(spec, which), g, threads));
      },
      py::arg("family"), py::arg("modes"), py::arg("a0"), py::arg("grid") = "", py::arg("field") = "M",
      py::arg("threads") = 1);

  m.def(
      "verify_builtin",
      [](const std::string& name, int threads) {
        return report_dict(sj::run_suite(sj::builtin_scenario(name), {sj::kDefaultPoleGuard, threads}));
      },
      py::arg("name"), py::arg("threads") = 1);

  m.def(
      "verify_json",
      [](const std::string& text, int threads) {
        return report_dict(sj::run_suite(sj::parse_scenario_text(text), {sj::kDefaultPoleGuard, threads}));
      },
      py::arg("text"), py::arg("threads") = 1);

  m.def("builtin_names", [] {
    std::vector<std::string> names;
    for (const auto& s : sj::builtin_scenarios()) names.push_back(s.name);
    return names;
  });
}
