#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "thermoait/cli.hpp"
#include "thermoait/error.hpp"
#include "thermoait/fixedpoint.hpp"
#include "thermoait/snapshot_io.hpp"
#include "thermoait/thermo.hpp"

namespace py = pybind11;
using namespace thermoait;

namespace {

// enclosures cross the boundary as exact dyadic strings, never floats
py::tuple pair(const Enclosure& e) { return py::make_tuple(e.lo().str(), e.hi().str()); }

py::dict as_dict(const ThermoEvaluation& ev) {
  py::dict d;
  d["T"] = ev.T.str();
  d["k"] = ev.k.get_str();
  d["limit"] = ev.extent == Extent::limit;
  for (const Quantity q : kAllQuantities) d[py::str(std::string(quantity_name(q)))] = pair(ev.get(q));
  return d;
}

// pybind11 holders cannot be pointer-to-const
using SnapshotPtr = std::shared_ptr<EnsembleSnapshot>;

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "certified thermodynamic quantities over prefix-free program ensembles";
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);

  py::class_<EnsembleSnapshot, SnapshotPtr>(m, "Snapshot")
      .def_property_readonly("id", &EnsembleSnapshot::id)
      .def_property_readonly("max_length", &EnsembleSnapshot::max_length)
      .def_property_readonly("total", [](const EnsembleSnapshot& s) { return s.total().get_str(); })
      .def_property_readonly("census",
                             [](const EnsembleSnapshot& s) {
                               std::map<std::uint32_t, std::string> c;
                               for (const auto& [l, n] : s.census()) c[l] = n.get_str();
                               return c;
                             })
      .def("save", [](const EnsembleSnapshot& s, const std::string& path) { save_snapshot(s, path); });

  m.def(
      "enumerate",
      [](const std::string& spec, std::uint64_t budget, std::uint32_t max_length) {
        return std::make_shared<EnsembleSnapshot>(enumerate(EnsembleSpec::parse(spec), budget, max_length));
      },
      py::arg("spec"), py::arg("budget") = 100000, py::arg("max_length") = 64);
  m.def(
      "load", [](const std::string& path) { return std::make_shared<EnsembleSnapshot>(load_snapshot(path)); },
      py::arg("path"));

  m.def(
      "evaluate",
      [](const SnapshotPtr& s, const std::string& T, std::optional<std::string> k, unsigned precision) {
        const Depth d = k ? Depth::prefix(mpz_class(*k)) : Depth::limit();
        return as_dict(evaluate(*s, Temperature::parse(T), d, precision));
      },
      py::arg("snapshot"), py::arg("T"), py::arg("k") = py::none(), py::arg("precision") = kDefaultPrecision);

  m.def(
      "solve",
      [](const SnapshotPtr& s, const std::string& quantity, const std::string& target, const std::string& tol) {
        const Enclosure t = Enclosure::of(parse_rational(target), 256);
        return pair(solve_temperature(*s, parse_handle_quantity(quantity), t, Dyadic::parse(tol)));
      },
      py::arg("snapshot"), py::arg("quantity"), py::arg("target"), py::arg("tol") = "1*2^-30");

  m.def(
      "certify",
      [](const SnapshotPtr& s, const std::string& quantity, const std::string& T) {
        const QuantityHandle h = certify(s, parse_handle_quantity(quantity), Temperature::parse(T));
        const ConditionCertificate& c = h.certificate();
        py::dict d;
        d["a"] = c.a;
        d["a_lower"] = c.a_lower;
        d["b"] = c.b;
        d["c"] = c.c;
        d["b_upper"] = c.b_upper;
        d["c_upper"] = c.c_upper;
        d["k0"] = c.k0.get_str();
        d["t"] = c.t.str();
        return d;
      },
      py::arg("snapshot"), py::arg("quantity"), py::arg("T"));

  // the command-line front end, for anything not bound above
  m.def("run", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"thermoait"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
