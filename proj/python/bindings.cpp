#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "noether/acceptance.hpp"
#include "noether/dsl.hpp"
#include "noether/nonlocal_model.hpp"
#include "noether/spectral_sim.hpp"
#include "noether/variational.hpp"

namespace py = pybind11;
using namespace noether;

namespace {

SymmetryVariation symmetry_from_name(const LagrangianSource& src, const std::string& kind) {
  if (kind == "u1") return SymmetryVariation::u1(src.complex_base);
  if (kind == "translation") return SymmetryVariation::translation();
  if (kind == "rotation") return SymmetryVariation::rotation();
  auto g = src.generators.find(kind);
  if (g != src.generators.end()) return SymmetryVariation::internal(src.complex_base, g->second);
  throw py::value_error("unknown symmetry '" + kind + "'");
}

struct Model {
  LagrangianSource source;
  LagrangianSpec spec;
};

py::dict charges_dict(const ChargeRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["Q"] = r.Q;
  d["E_tot"] = r.E_tot;
  d["P"] = r.P;
  d["M"] = r.M;
  d["leakage"] = r.leakage;
  return d;
}

}  // namespace

PYBIND11_MODULE(_noether, m) {
  m.doc() = "Noether currents for higher-derivative and non-local scalar theories";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Expr>(m, "Expr")
      .def_property_readonly("dim", &Expr::dim)
      .def_property_readonly("free_labels", &Expr::free_labels)
      .def("is_zero", &Expr::is_zero)
      .def("__len__", &Expr::size)
      .def("__str__", [](const Expr& e) { return render(e); })
      .def("__repr__", [](const Expr& e) { return "<Expr " + render(e) + ">"; })
      .def("to_json", [](const Expr& e) { return to_json(e).dump(); })
      .def("component", [](const Expr& e, const std::map<std::string, int>& v) { return component(e, v); })
      .def("commute_derivatives", [](const Expr& e) { return commute_derivatives(e); })
      .def(py::self == py::self)
      .def(py::self + py::self)
      .def(py::self - py::self);

  m.def("parse_expr", [](const std::string& text, int dim) { return parse_expr(text, dim); }, py::arg("text"),
        py::arg("dim") = 4);
  m.def("expr_from_json", [](const std::string& text) { return from_json(nlohmann::json::parse(text)); });

  py::class_<Model>(m, "Lagrangian")
      .def(py::init([](const std::string& text) {
             Model md;
             md.source = parse_lagrangian_source(text);
             md.spec = LagrangianSpec::from_source(md.source);
             return md;
           }),
           py::arg("source"))
      .def_property_readonly("dim", [](const Model& md) { return md.spec.dim(); })
      .def_property_readonly("fields", [](const Model& md) { return md.spec.fields; })
      .def_property_readonly("max_order", [](const Model& md) { return md.spec.max_order; })
      .def_property_readonly("generators",
                             [](const Model& md) {
                               std::vector<std::string> names;
                               for (const auto& [k, v] : md.source.generators) names.push_back(k);
                               return names;
                             })
      .def_property_readonly("expr", [](const Model& md) { return md.spec.expr; })
      .def("euler_lagrange", [](const Model& md, const std::string& f) { return euler_lagrange(md.spec, f); })
      .def(
          "current",
          [](const Model& md, const std::string& kind) {
            return noether_current(md.spec, symmetry_from_name(md.source, kind));
          },
          py::arg("symmetry"), "Noether current for 'u1', 'translation', 'rotation' or a generator name.")
      .def("divergence_defect",
           [](const Model& md, const std::string& kind) {
             return divergence_defect(md.spec, symmetry_from_name(md.source, kind));
           })
      .def("invariance_residual", [](const Model& md, const std::string& kind) {
        return invariance_residual(md.spec, symmetry_from_name(md.source, kind));
      });

  m.def("shipped_lagrangians", &acceptance::shipped_lagrangians);

  // Non-local model.
  m.def(
      "series_coeff",
      [](int l) {
        SeriesCoefficient c = series_coeff(l);
        return py::make_tuple(c.value.get_num().get_str(), c.value.get_den().get_str(), c.mass_power);
      },
      "(numerator, denominator, mass_power) of f_l(m).");
  m.def("truncated_sqrt", &truncated_sqrt, py::arg("m"), py::arg("x"), py::arg("order"));
  m.def("truncation_error", &truncation_error, py::arg("m"), py::arg("x"), py::arg("order"));
  m.def("two_sided_kernel", &two_sided_kernel, py::arg("m"), py::arg("x"), py::arg("y"), py::arg("order"));
  m.def("two_sided_kernel_closed", &two_sided_kernel_closed, py::arg("m"), py::arg("x"), py::arg("y"));
  m.def("dispersion", &dispersion);
  m.def(
      "ward_defect",
      [](double mass, double p0_out, std::vector<double> p_out, double p0_in, std::vector<double> p_in) {
        return ward_defect(mass, FourMomentum::make_off_shell(p0_out, std::move(p_out)),
                           FourMomentum::make_off_shell(p0_in, std::move(p_in)));
      },
      py::arg("m"), py::arg("p0_out"), py::arg("p_out"), py::arg("p0_in"), py::arg("p_in"));
  m.def("truncated_model_lagrangian", [](int order, int dim) { return truncated_model_lagrangian(order, dim).expr; });
  m.def("series_vector_current", [](int order, int dim) { return series_vector_current(order, dim); });
  m.def("gauged_functional_derivative",
        [](int order, int dim, int sigma) { return gauged_functional_derivative(order, dim, sigma); });

  // Simulator.
  py::class_<LatticeConfig>(m, "LatticeConfig")
      .def(py::init([](int d, int N, double box, double mass, double dt, int steps) {
             LatticeConfig c{d, N, box, mass, dt, steps};
             c.validate();
             return c;
           }),
           py::arg("d") = 1, py::arg("N") = 64, py::arg("box") = 64.0, py::arg("m") = 1.0, py::arg("dt") = 0.01,
           py::arg("steps") = 100)
      .def_readonly("d", &LatticeConfig::d)
      .def_readonly("N", &LatticeConfig::N)
      .def_readonly("box", &LatticeConfig::box)
      .def_readonly("m", &LatticeConfig::m)
      .def_readonly("dt", &LatticeConfig::dt)
      .def_readonly("steps", &LatticeConfig::steps);

  py::class_<SpectralState>(m, "State")
      .def_readonly("t", &SpectralState::t)
      .def("evolve", &evolve, py::arg("n_steps"))
      .def("charges", [](const SpectralState& s) { return charges_dict(total_charges(s)); })
      .def("continuity_defect", &continuity_defect)
      .def("emt_continuity_defects", &emt_continuity_defects)
      .def("centroid", &centroid)
      .def("symmetry_test",
           [](const SpectralState& s, const std::string& which) {
             if (which == "P") return symmetry_test(s, DiscreteSymmetry::P);
             if (which == "T") return symmetry_test(s, DiscreteSymmetry::T);
             if (which == "C") return symmetry_test(s, DiscreteSymmetry::C);
             throw py::value_error("symmetry must be 'P', 'T' or 'C'");
           })
      .def("field", [](const SpectralState& s) {
        std::vector<cplx> f = position_field(s);
        std::vector<py::ssize_t> shape(static_cast<std::size_t>(s.cfg().d), s.cfg().N);
        py::array_t<cplx> out(shape);
        std::copy(f.begin(), f.end(), out.mutable_data());
        return out;
      });

  m.def(
      "init_packet",
      [](const LatticeConfig& cfg, std::vector<double> center, double width, std::vector<double> carrier,
         double amplitude) { return init_packet(cfg, {std::move(center), width, std::move(carrier), amplitude}); },
      py::arg("config"), py::arg("center"), py::arg("width"), py::arg("carrier"), py::arg("amplitude") = 1.0);
  m.def("plane_wave", &plane_wave, py::arg("config"), py::arg("n"), py::arg("amplitude"));

  // Acceptance suite.
  m.def("suite_names", &acceptance::suite_names);
  m.def(
      "run_criterion",
      [](const std::string& name, double tol_scale, std::uint64_t seed) {
        int id = acceptance::suite_id(name);
        if (id == 0) throw py::value_error("unknown criterion '" + name + "'");
        acceptance::Result r = acceptance::run(id, {tol_scale, seed});
        py::dict d;
        d["id"] = r.id;
        d["name"] = r.name;
        d["passed"] = r.passed;
        d["seconds"] = r.seconds;
        d["detail"] = r.detail;
        d["line"] = acceptance::format(r);
        return d;
      },
      py::arg("name"), py::arg("tol_scale") = 1.0, py::arg("seed") = 20241018);
}
