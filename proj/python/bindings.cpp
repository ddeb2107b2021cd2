#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "csc/oracle.hpp"
#include "csc/path.hpp"
#include "csc/report.hpp"
#include "csc/scenario.hpp"

namespace py = pybind11;
using namespace csc;

namespace {

using Arr3 = std::array<double, 3>;

Vec3 vec(const Arr3& a) { return {a[0], a[1], a[2]}; }
Arr3 arr(const Vec3& v) { return {v.x, v.y, v.z}; }
std::pair<double, double> pair_of(const HPair& h) { return {h.h_i, h.h_f}; }
HPair hpair(const std::pair<double, double>& p) { return {p.first, p.second}; }

ProblemInstance make_instance(const Arr3& xi, const Arr3& vi, const Arr3& xf, const Arr3& vf, double r) {
  ProblemInstance inst{{vec(xi), normalize(vec(vi))}, {vec(xf), normalize(vec(vf))}, r};
  inst.validate();
  return inst;
}

SolverOptions make_options(const std::string& seeds, std::pair<double, double> seed, int grid_n, double grid_half_width,
                           double residual_tol, int max_iters, double dedup_tol, bool use_gradient, double h_bound) {
  SolverOptions o;
  if (seeds == "grid") {
    o.seed_policy = SeedPolicy::grid(grid_n, grid_half_width);
  } else if (seeds == "single") {
    o.seed_policy = SeedPolicy::single_seed(hpair(seed));
  } else {
    throw CscError(ErrorKind::invalid_input, "seeds must be 'grid' or 'single'");
  }
  o.residual_tol = residual_tol;
  o.max_iters = max_iters;
  o.dedup_tol = dedup_tol;
  o.use_gradient = use_gradient;
  o.h_bound = h_bound;
  o.validate();
  return o;
}

py::dict arc_dict(const Arc& a) {
  py::dict d;
  d["center"] = arr(a.center);
  d["radius"] = a.radius;
  d["plane_normal"] = arr(a.plane_normal);
  d["start_point"] = arr(a.start_point);
  d["end_point"] = arr(a.end_point());
  d["angle"] = a.angle;
  d["degenerate"] = a.degenerate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Three-dimensional CSC Dubins paths from two h-offsets";

  static py::exception<CscError> error(m, "CscError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const CscError& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
    }
  });

  py::class_<ProblemInstance>(m, "ProblemInstance")
      .def(py::init(&make_instance), py::arg("start_position"), py::arg("start_direction"),
           py::arg("goal_position"), py::arg("goal_direction"), py::arg("radius") = 1.0)
      .def_property_readonly("start_position", [](const ProblemInstance& i) { return arr(i.start.position); })
      .def_property_readonly("start_direction", [](const ProblemInstance& i) { return arr(i.start.direction); })
      .def_property_readonly("goal_position", [](const ProblemInstance& i) { return arr(i.goal.position); })
      .def_property_readonly("goal_direction", [](const ProblemInstance& i) { return arr(i.goal.direction); })
      .def_readonly("radius", &ProblemInstance::radius)
      .def("distance", &ProblemInstance::distance)
      .def("is_collinear", [](const ProblemInstance& i) { return is_collinear(i); });

  py::class_<SolutionType>(m, "SolutionType")
      .def_static("from_id", &SolutionType::from_id)
      .def_static("all", [] {
        const auto a = SolutionType::all();
        return std::vector<SolutionType>(a.begin(), a.end());
      })
      .def_property_readonly("id", &SolutionType::id)
      .def_readonly("switched", &SolutionType::switched)
      .def_property_readonly("start_sign", [](const SolutionType& t) { return to_double(t.start_sign); })
      .def_property_readonly("end_sign", [](const SolutionType& t) { return to_double(t.end_sign); })
      .def("__eq__", [](const SolutionType& a, const SolutionType& b) { return a == b; })
      .def("__hash__", [](const SolutionType& t) { return t.id(); })
      .def("__repr__", [](const SolutionType& t) { return "<SolutionType " + to_string(t) + ">"; });

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init(&make_options), py::kw_only(), py::arg("seeds") = "grid",
           py::arg("seed") = std::pair<double, double>{0.0, 0.0}, py::arg("grid_n") = 5,
           py::arg("grid_half_width") = 0.0, py::arg("residual_tol") = 1e-9, py::arg("max_iters") = 100,
           py::arg("dedup_tol") = 1e-6, py::arg("use_gradient") = true, py::arg("h_bound") = 0.0)
      .def_readonly("residual_tol", &SolverOptions::residual_tol)
      .def_readonly("max_iters", &SolverOptions::max_iters)
      .def_readonly("use_gradient", &SolverOptions::use_gradient);

  py::class_<SolutionCandidate>(m, "Solution")
      .def_readonly("type", &SolutionCandidate::type)
      .def_property_readonly("h", [](const SolutionCandidate& c) { return pair_of(c.hp); })
      .def_property_readonly("residual",
                             [](const SolutionCandidate& c) { return std::pair{c.residual.p_i, c.residual.p_f}; })
      .def_readonly("iterations", &SolutionCandidate::iterations)
      .def_property_readonly("seed", [](const SolutionCandidate& c) { return pair_of(c.seed); })
      .def_property_readonly("center_start", [](const SolutionCandidate& c) { return arr(c.geometry.c_i); })
      .def_property_readonly("center_goal", [](const SolutionCandidate& c) { return arr(c.geometry.c_f); })
      .def_property_readonly("valid", [](const SolutionCandidate& c) { return check_directionality(c).valid; })
      .def_property_readonly("reason",
                             [](const SolutionCandidate& c) { return to_string(check_directionality(c).reason); })
      .def("__repr__", [](const SolutionCandidate& c) {
        return "<Solution " + to_string(c.type) + " h=(" + format_double(c.hp.h_i) + ", " + format_double(c.hp.h_f) +
               ")>";
      });

  py::class_<CscPath>(m, "Path")
      .def_readonly("type", &CscPath::type)
      .def_readonly("total_length", &CscPath::total_length)
      .def_property_readonly("arc_start", [](const CscPath& p) { return arc_dict(p.arc_start); })
      .def_property_readonly("arc_end", [](const CscPath& p) { return arc_dict(p.arc_end); })
      .def_property_readonly("segment",
                             [](const CscPath& p) {
                               py::dict d;
                               d["from"] = arr(p.segment.from);
                               d["to"] = arr(p.segment.to);
                               d["reversed"] = p.segment.reversed;
                               d["length"] = p.segment.length();
                               return d;
                             })
      .def_property_readonly("travel_direction", [](const CscPath& p) { return arr(p.travel_direction); })
      .def(
          "sample",
          [](const CscPath& p, int n) {
            std::vector<Arr3> out;
            for (const auto& q : sample_path(p, n)) out.push_back(arr(q));
            return out;
          },
          py::arg("n"));

  m.def(
      "residuals",
      [](const ProblemInstance& inst, int type, std::pair<double, double> h) {
        const auto r = residuals(inst, SolutionType::from_id(type), hpair(h)).first;
        return std::pair{r.p_i, r.p_f};
      },
      py::arg("instance"), py::arg("type"), py::arg("h"));
  m.def(
      "jacobian",
      [](const ProblemInstance& inst, int type, std::pair<double, double> h) {
        const auto j = jacobian(inst, SolutionType::from_id(type), hpair(h)).first;
        return std::array<std::array<double, 2>, 2>{{{j.dpi_dhi, j.dpi_dhf}, {j.dpf_dhi, j.dpf_dhf}}};
      },
      py::arg("instance"), py::arg("type"), py::arg("h"));
  m.def(
      "solve_type",
      [](const ProblemInstance& inst, int type, std::pair<double, double> seed, const SolverOptions& o) {
        return solve_type(inst, SolutionType::from_id(type), hpair(seed), o);
      },
      py::arg("instance"), py::arg("type"), py::arg("seed"), py::arg("options") = SolverOptions{});
  m.def("solve_all", &solve_all, py::arg("instance"), py::arg("options") = SolverOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("extract_path", &extract_path, py::arg("solution"), py::arg("instance"));
  m.def("straight_path", &straight_path, py::arg("instance"));
  m.def(
      "verify_path",
      [](const CscPath& p, const ProblemInstance& inst, double tol) {
        const auto rep = verify_path(p, inst, tol);
        py::dict errors;
        for (const auto& c : rep.checks) errors[py::str(c.name)] = c.error;
        return std::pair<bool, py::dict>{rep.passed(), errors};
      },
      py::arg("path"), py::arg("instance"), py::arg("tol") = 1e-8);
  m.def(
      "enumerate_roots",
      [](const ProblemInstance& inst, int type, std::optional<std::array<double, 4>> window, int resolution) {
        GridWindow w = GridWindow::default_for(inst, resolution);
        if (window) w = {(*window)[0], (*window)[1], (*window)[2], (*window)[3], resolution};
        std::vector<std::pair<double, double>> out;
        for (const auto& r : enumerate_roots(inst, SolutionType::from_id(type), w)) out.push_back(pair_of(r));
        return out;
      },
      py::arg("instance"), py::arg("type"), py::arg("window") = py::none(), py::arg("resolution") = 400,
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "solve_scenario_json",
      [](const std::string& path) { return case_report_json(run_case(load_scenario(path))).dump(); },
      py::arg("path"), "Run a scenario file and return the report as a JSON string.");
}
