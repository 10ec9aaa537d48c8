#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elcomp/assembly.hpp"
#include "elcomp/error.hpp"
#include "elcomp/expr.hpp"
#include "elcomp/problem_file.hpp"
#include "elcomp/report.hpp"
#include "elcomp/spectral.hpp"

namespace py = pybind11;
using namespace elcomp;

namespace {

CommandArgs make_args(const std::string& problem, const py::dict& opts) {
  CommandArgs a;
  a.problem = problem;
  for (auto item : opts) {
    const auto key = py::cast<std::string>(item.first);
    const py::handle v = item.second;
    if (key == "mode") {
      a.certify.mode = parse_mode(py::cast<std::string>(v));
    } else if (key == "tol_cond") {
      a.certify.tol_cond = py::cast<double>(v);
    } else if (key == "tol_eig") {
      a.certify.eig.tol_eig = py::cast<double>(v);
    } else if (key == "max_iter") {
      a.certify.eig.max_iter = py::cast<std::size_t>(v);
    } else if (key == "oracle_max_dof") {
      a.certify.oracle_max_dof = py::cast<std::size_t>(v);
    } else if (key == "seed") {
      a.seed = py::cast<std::uint64_t>(v);
    } else if (key == "component") {
      a.component = py::cast<std::size_t>(v);
    } else if (key == "cooperative") {
      a.cooperative = py::cast<bool>(v);
    } else if (key == "gauge") {
      a.gauge = py::cast<bool>(v);
    } else if (key == "probe") {
      a.probe = py::cast<std::size_t>(v);
    } else if (key == "builtin") {
      a.builtin = py::cast<bool>(v);
    } else if (key == "rhs_file") {
      a.rhs_file = py::cast<std::string>(v);
    } else if (key == "out") {
      a.out = py::cast<std::string>(v);
    } else if (key == "sub") {
      a.sub = py::cast<std::string>(v);
    } else if (key == "super") {
      a.super = py::cast<std::string>(v);
    } else {
      throw py::value_error("unknown option '" + key + "'");
    }
  }
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Comparison-principle certifier for weakly coupled elliptic systems";

  static py::exception<Error> error_type(m, "ElcompError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.code())) + ": " + e.what();
      PyErr_SetString(error_type.ptr(), msg.c_str());
    }
  });

  m.def("version", &tool_version);

  m.def(
      "run_command",
      [](const std::string& command, const std::string& problem, const py::dict& opts) {
        const CommandArgs args = make_args(problem, opts);
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(command, args);
        }
        return py::make_tuple(r.exit_code, r.report.dump(), r.text);
      },
      py::arg("command"), py::arg("problem"), py::arg("options") = py::dict(),
      "Runs a CLI command in-process; returns (exit_code, report_json, text).");

  m.def(
      "canonical_dump", [](const std::string& report) { return canonical_dump(Json::parse(report)); },
      py::arg("report_json"), "Serialized report without timings.");

  m.def(
      "evaluate",
      [](const std::string& expr, double x, double y) {
        const double pt[2] = {x, y};
        return eval_expr(parse_expr(expr), pt);
      },
      py::arg("expr"), py::arg("x"), py::arg("y") = 0.0);

  m.def(
      "principal_eigenvalue",
      [](const std::string& path) {
        const Problem p = load_problem(path);
        if (!p.linear) throw Error(ErrorCode::validation, "principal_eigenvalue needs a linear problem");
        const EigenPair e = cooperative_eigen(*p.linear);
        return py::make_tuple(e.lambda, e.cw.lo, e.cw.hi);
      },
      py::arg("path"), "Principal eigenvalue of L + M^- with its enclosure (lambda, lo, hi).");

  m.def(
      "grid_id",
      [](int dim, std::vector<double> lo, std::vector<double> hi, std::vector<int> n) {
        return build_grid(dim, lo, hi, n).id();
      },
      py::arg("dim"), py::arg("lo"), py::arg("hi"), py::arg("n"));
}
