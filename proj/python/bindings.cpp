// Python bindings for the main pipeline operations. Structured results are
// returned as plain dicts (decoded from the library's canonical JSON forms)
// so Python callers see the same artifact schema the CLI writes.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "holorigid/config.hpp"
#include "holorigid/errors.hpp"
#include "holorigid/map_engine.hpp"
#include "holorigid/markov.hpp"
#include "holorigid/orbits.hpp"
#include "holorigid/rigidity.hpp"
#include "holorigid/thermo.hpp"

namespace py = pybind11;
using namespace holorigid;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict verdict_dict(const RigidityVerdict& v) {
  return json_to_py(v.to_json());
}

}  // namespace

PYBIND11_MODULE(holorigid, m) {
  m.doc() =
      "Expansion-certified symbolic models, pressure and dimension reports, "
      "and conformal-rigidity verdicts for polynomial-like maps";
  m.attr("__version__") = kToolVersion;

  py::register_exception<InputError>(m, "InputError");
  py::register_exception<UncertifiedModelError>(m, "UncertifiedModelError");
  py::register_exception<DegenerateMapError>(m, "DegenerateMapError");
  py::register_exception<SolverFailureError>(m, "SolverFailureError");
  py::register_exception<BridgeNotFoundError>(m, "BridgeNotFoundError");
  py::register_exception<EmptyModelError>(m, "EmptyModelError");
  py::register_exception<NonTransitiveError>(m, "NonTransitiveError");
  py::register_exception<NoSignChangeError>(m, "NoSignChangeError");
  py::register_exception<GraphMismatchError>(m, "GraphMismatchError");

  py::class_<MapSpec>(m, "Map")
      .def_property_readonly("degree", &MapSpec::degree)
      .def_property_readonly(
          "critical_point",
          [](const MapSpec& f) { return f.critical_point; })
      .def("eval",
           [](const MapSpec& f, Complex z) -> py::object {
             auto w = f.eval(z);
             return w ? py::cast(*w) : py::none();
           },
           py::arg("z"), "Apply the map; None when z leaves every branch.")
      .def("deriv",
           [](const MapSpec& f, Complex z) -> py::object {
             auto w = f.deriv(z);
             return w ? py::cast(*w) : py::none();
           },
           py::arg("z"))
      .def("to_json", [](const MapSpec& f) { return json_to_py(map_to_json(f)); })
      .def("__repr__", [](const MapSpec& f) {
        return "<Map degree " + std::to_string(f.degree()) + ">";
      });

  m.def("quadratic_map", [](Complex c) { return quadratic_map(c); },
        py::arg("c"), "One-branch quadratic z^2 + c on its standard disc.");
  m.def("affine_conjugate", &affine_conjugate, py::arg("f"), py::arg("a"),
        py::arg("b"), "Conjugate by z -> a*z + b.");
  m.def("load_map", &load_map, py::arg("path"));
  m.def("save_map", &save_map, py::arg("f"), py::arg("path"));
  m.def("classify_degenerate",
        [](const MapSpec& f) {
          DegenerateFlags fl = classify_degenerate(f);
          py::dict d;
          d["chebyshev"] = fl.chebyshev;
          d["power_like"] = fl.power_like;
          return d;
        },
        py::arg("f"));
  m.def("critical_orbit",
        [](const MapSpec& f, int n) {
          CriticalOrbit co = critical_orbit(f, n);
          return py::make_tuple(co.points, co.escaped);
        },
        py::arg("f"), py::arg("n"),
        "Forward critical orbit: (points, escaped).");

  py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
      .def_readonly("points", &PeriodicOrbit::points)
      .def_readonly("period", &PeriodicOrbit::period)
      .def_readonly("multiplier_abs", &PeriodicOrbit::multiplier_abs)
      .def_readonly("word", &PeriodicOrbit::word)
      .def_readonly("post_critical", &PeriodicOrbit::post_critical)
      .def("__repr__", [](const PeriodicOrbit& o) {
        return "<PeriodicOrbit period " + std::to_string(o.period) +
               " multiplier " + fmt_double(o.multiplier_abs) + ">";
      });

  m.def("find_periodic", &find_periodic, py::arg("f"), py::arg("period"),
        py::arg("tol") = 1e-9);
  m.def("all_orbits_upto", &all_orbits_upto, py::arg("f"),
        py::arg("max_period"), py::arg("tol") = 1e-9);
  m.def("multiplier_spectrum",
        [](const MapSpec& f, int max_period, double tol) {
          py::list out;
          for (const SpectrumEntry& e : multiplier_spectrum(f, max_period, tol)) {
            py::dict d;
            d["period"] = e.period;
            d["multiplier_abs"] = e.multiplier_abs;
            d["point"] = e.point;
            d["word"] = e.word;
            out.append(std::move(d));
          }
          return out;
        },
        py::arg("f"), py::arg("max_period"), py::arg("tol") = 1e-9);
  m.def("select_anchor_orbits", &select_anchor_orbits, py::arg("f"),
        py::arg("skip") = 0);

  py::class_<MarkovModel>(m, "Model")
      .def_property_readonly(
          "states", [](const MarkovModel& m_) { return m_.states.size(); })
      .def_property_readonly(
          "transitions",
          [](const MarkovModel& m_) { return m_.transitions.size(); })
      .def_property_readonly("kappa",
                             [](const MarkovModel& m_) -> py::object {
                               if (!m_.expansion) return py::none();
                               return py::cast(m_.expansion->kappa);
                             })
      .def_property_readonly("certified",
                             [](const MarkovModel& m_) {
                               return m_.expansion.has_value();
                             })
      .def("is_transitive",
           [](const MarkovModel& m_) { return is_transitive(m_); })
      .def("to_json",
           [](const MarkovModel& m_) { return json_to_py(m_.to_json()); })
      .def("__repr__", [](const MarkovModel& m_) {
        return "<Model " + std::to_string(m_.states.size()) + " states, " +
               std::to_string(m_.transitions.size()) + " transitions>";
      });

  m.def("load_model", &load_model, py::arg("path"));
  m.def("save_model", &save_model, py::arg("m"), py::arg("path"));
  m.def("build_an", &build_AN, py::arg("f"), py::arg("critical_radius"),
        py::arg("cell_size"), py::arg("depth"),
        "Grid model over the off-critical invariant set.");
  m.def("build_bn",
        [](const MapSpec& f, const std::vector<PeriodicOrbit>& anchors,
           double neighborhood_radius) {
          auto [plan, model] = build_Bn(f, anchors, neighborhood_radius);
          return py::make_tuple(json_to_py(plan.to_json()), model);
        },
        py::arg("f"), py::arg("anchors"), py::arg("neighborhood_radius"),
        "Anchored orbit model; returns (plan_dict, model).");
  m.def("make_full_shift", &make_full_shift, py::arg("derivs"));
  m.def("make_golden_mean", &make_golden_mean, py::arg("d0"), py::arg("d1"));
  m.def("make_cycle", &make_cycle, py::arg("n"), py::arg("deriv"));
  m.def("make_circle_doubling", &make_circle_doubling, py::arg("arcs"));
  m.def("model_spectrum", &model_spectrum, py::arg("m"), py::arg("max_period"),
        "Per-word (period, geometric-mean multiplier) pairs of the model.");

  m.def("pressure",
        [](const MarkovModel& m_, double t, int order) {
          auto [lo, hi] = pressure(m_, PotentialSpec::log_deriv_scaled(t), order);
          return py::make_tuple(lo, hi);
        },
        py::arg("m"), py::arg("t"), py::arg("order") = 12,
        "Two-sided enclosure of the order-n pressure of -t*log|Df|.");
  m.def("entropy", &entropy, py::arg("m"));
  m.def("bowen_dimension",
        [](const MarkovModel& m_, int order, double tol) {
          auto [lo, hi] = bowen_dimension(m_, order, tol);
          return py::make_tuple(lo, hi);
        },
        py::arg("m"), py::arg("order") = 12, py::arg("tol") = 1e-8);
  m.def("dimension_report",
        [](const MarkovModel& m_, int order, double tol) {
          return json_to_py(dimension_report(m_, order, tol).to_json());
        },
        py::arg("m"), py::arg("order") = 12, py::arg("tol") = 1e-8);

  m.def("livshitz_test",
        [](const MarkovModel& m_, double t_scale, double constant,
           int max_period, double tol) {
          return verdict_dict(livshitz_test(
              m_, PotentialSpec::log_deriv_scaled(t_scale),
              PotentialSpec::constant(constant), max_period, tol));
        },
        py::arg("m"), py::arg("t_scale") = 1.0, py::arg("constant") = 0.0,
        py::arg("max_period") = 6, py::arg("tol") = 1e-6,
        "Orbit-sum cohomology test of -t*log|Df| against a constant.");
  m.def("constant_multiplier_test",
        [](const std::vector<std::pair<int, double>>& spectrum, double tol) {
          return verdict_dict(constant_multiplier_test(spectrum, tol));
        },
        py::arg("spectrum"), py::arg("tol") = 1e-6);
  m.def("affine_structure_test",
        [](const MarkovModel& m_, int max_period, double tol) {
          return verdict_dict(affine_structure_test(m_, max_period, tol));
        },
        py::arg("m"), py::arg("max_period") = 6, py::arg("tol") = 1e-6);
  m.def("pair_and_compare",
        [](const MarkovModel& mf, const MarkovModel& mg, int max_period,
           double tol) {
          return verdict_dict(pair_and_compare(mf, mg, max_period, tol));
        },
        py::arg("model_f"), py::arg("model_g"), py::arg("max_period") = 6,
        py::arg("tol") = 1e-6);
  m.def("rigidity_verdict",
        [](const MapSpec& f, const MapSpec& g, int max_period, double tol) {
          return json_to_py(rigidity_verdict(f, g, max_period, tol).to_json());
        },
        py::arg("f"), py::arg("g"), py::arg("max_period") = 6,
        py::arg("tol") = 1e-6,
        "Full conjugacy-criteria pipeline; returns the verdict report dict.");
}
