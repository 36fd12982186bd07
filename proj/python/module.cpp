// Python bindings. Structured values cross the boundary as JSON text in the
// same layout as the command-line outputs; the package wraps them in dicts.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hullscope/discs.hpp"
#include "hullscope/fixtures.hpp"
#include "hullscope/hullengine.hpp"
#include "hullscope/io.hpp"
#include "hullscope/polyspace.hpp"
#include "hullscope/run.hpp"

namespace py = pybind11;
using namespace hullscope;
using nlohmann::json;

namespace {

SampledCompact compact_arg(const std::string& text) {
  const json j = json::parse(text);
  return io::compact_from(j.contains("compact") ? j.at("compact") : j);
}

json flags_json(const std::vector<SolveFlags>& flags) {
  json out = json::array();
  for (const SolveFlags& f : flags) out.push_back(io::flag_string(f));
  return out;
}

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (const double x : xs) out.push_back(io::number(x));
  return out;
}

std::string best_constant_json(const std::string& compact, const CVec& x, int dmax) {
  const BestConstantTrace t = best_constant(compact_arg(compact), project(x), dmax);
  return json{{"degrees", t.degrees},
              {"values", numbers(t.values)},
              {"cumulative", numbers(t.cumulative)},
              {"flags", flags_json(t.flags)},
              {"radius", io::number(t.radius)}}
      .dump();
}

std::string extremal_json(const std::string& compact, const CVec& z, int dmax) {
  const ExtremalSample e = affine_extremal(compact_arg(compact), z, dmax);
  return json{{"degrees", e.degrees},
              {"values", numbers(e.v_values)},
              {"cumulative", numbers(e.cumulative)},
              {"flags", flags_json(e.flags)},
              {"finite", e.finite}}
      .dump();
}

SearchConfig search_arg(const std::string& text) {
  return text.empty() ? SearchConfig{} : io::search_config_from(json::parse(text));
}

// Library errors surface as ValueError carrying the error code.
void translate(std::exception_ptr p) {
  try {
    if (p) std::rethrow_exception(p);
  } catch (const Error& e) {
    PyErr_SetString(PyExc_ValueError, error_json(e).dump().c_str());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hullscope native core";
  m.attr("__version__") = kVersion;
  py::register_exception_translator(&translate);

  m.def("generator_names", &generator_names);
  m.def("generate", [](const std::string& name, const std::string& params) {
    return io::to_json(generate(name, json::parse(params))).dump();
  });
  m.def("certificate", [](const std::string& fixture, int length) {
    return io::to_json(standard_certificate(io::fixture_from(json::parse(fixture)), length)).dump();
  });
  m.def("best_constant", &best_constant_json, py::arg("compact"), py::arg("x"), py::arg("dmax"));
  m.def("affine_extremal", &extremal_json, py::arg("compact"), py::arg("z"), py::arg("dmax"));
  m.def(
      "classify_hull",
      [](const std::string& compact, const std::vector<CVec>& grid, int dmax, int threads) {
        py::gil_scoped_release release;
        return io::to_json(classify_hull(compact_arg(compact), grid, dmax, {}, threads)).dump();
      },
      py::arg("compact"), py::arg("grid"), py::arg("dmax"), py::arg("threads") = 0);
  m.def("j_functional", [](const std::string& disc, const CVec& hyperplane) {
    return j_functional(io::disc_from(json::parse(disc)), hyperplane);
  });
  m.def(
      "disc_search_envelope",
      [](const std::string& compact, double margin, const CVec& p, int degree, const std::string& search) {
        CVec h = CVec::Zero(p.size() + 1);
        h(0) = 1.0;
        py::gil_scoped_release release;
        return io::to_json(disc_search_envelope(compact_arg(compact), margin, p, degree, h, search_arg(search))).dump();
      },
      py::arg("compact"), py::arg("margin"), py::arg("p"), py::arg("degree"), py::arg("search") = "");
  m.def(
      "disc_search_boundary",
      [](const std::string& compact, const CVec& p, int degree, const std::string& search) {
        py::gil_scoped_release release;
        return io::to_json(disc_search_boundary(compact_arg(compact), p, degree, search_arg(search))).dump();
      },
      py::arg("compact"), py::arg("p"), py::arg("degree"), py::arg("search") = "");
  m.def("verify_psequence", [](const std::string& certificate, const std::string& compact, int m) {
    const Certificate c = io::certificate_from(json::parse(certificate));
    return io::to_json(verify_psequence(c.discs, compact_arg(compact), c.center, c.schedule, m)).dump();
  });
  m.def("run", [](const std::string& config, int threads) {
    const RunConfig c = run_config_from(json::parse(config));
    py::gil_scoped_release release;
    const RunOutcome out = run(c, threads);
    return json{{"outputs", out.outputs}, {"summary", out.summary}}.dump();
  });
}
