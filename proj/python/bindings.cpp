#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>

#include "biotcr/io.hpp"
#include "biotcr/system.hpp"
#include "biotcr/verification.hpp"

namespace py = pybind11;
using namespace biotcr;

namespace {

Eigen::MatrixXd vertex_array(const Mesh& m) {
  Eigen::MatrixXd out(m.num_vertices(), 2);
  for (std::size_t v = 0; v < m.num_vertices(); ++v) out.row(v) = m.vertex(v).transpose();
  return out;
}

Eigen::Matrix<long, Eigen::Dynamic, 3, Eigen::RowMajor> cell_array(const Mesh& m) {
  Eigen::Matrix<long, Eigen::Dynamic, 3, Eigen::RowMajor> out(m.num_cells(), 3);
  for (std::size_t c = 0; c < m.num_cells(); ++c)
    for (int k = 0; k < 3; ++k) out(c, k) = static_cast<long>(m.cell(c)[k]);
  return out;
}

Mesh mesh_from_arrays(const Eigen::MatrixXd& vertices,
                      const Eigen::Matrix<long, Eigen::Dynamic, 3, Eigen::RowMajor>& cells) {
  if (vertices.cols() != 2) throw std::invalid_argument("vertices must have shape (n, 2)");
  std::vector<Point> v;
  for (Eigen::Index i = 0; i < vertices.rows(); ++i) v.emplace_back(vertices(i, 0), vertices(i, 1));
  std::vector<std::array<std::size_t, 3>> c;
  for (Eigen::Index i = 0; i < cells.rows(); ++i) {
    std::array<std::size_t, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      if (cells(i, k) < 0 || cells(i, k) >= vertices.rows()) throw std::invalid_argument("cell index out of range");
      tri[k] = static_cast<std::size_t>(cells(i, k));
    }
    c.push_back(tri);
  }
  return Mesh::from_triangles(std::move(v), std::move(c));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Biot poroelasticity with Crouzeix-Raviart displacement and mass-lumped RT0 flux";

  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<MassMode>(m, "MassMode").value("Consistent", MassMode::Consistent).value("Lumped", MassMode::Lumped);
  py::enum_<DiagonalRule>(m, "DiagonalRule")
      .value("SouthWestToNorthEast", DiagonalRule::SouthWestToNorthEast)
      .value("Alternating", DiagonalRule::Alternating);
  py::enum_<KappaSpec>(m, "KappaSpec").value("Homogeneous", KappaSpec::Homogeneous).value("Checkerboard", KappaSpec::Checkerboard);

  py::class_<Mesh>(m, "Mesh")
      .def_static("from_arrays", &mesh_from_arrays, py::arg("vertices"), py::arg("cells"))
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("num_faces", &Mesh::num_faces)
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("cells", &cell_array)
      .def_property_readonly("cell_areas",
                             [](const Mesh& mesh) {
                               Vector a(mesh.num_cells());
                               for (std::size_t c = 0; c < mesh.num_cells(); ++c) a[c] = mesh.cell_area(c);
                               return a;
                             })
      .def_property_readonly("lumping_weights",
                             [](const Mesh& mesh) {
                               Vector w(mesh.num_faces());
                               for (std::size_t f = 0; f < mesh.num_faces(); ++f) w[f] = mesh.face(f).omega;
                               return w;
                             })
      .def("degenerate_faces", [](const Mesh& mesh, double tol) { return degenerate_faces(mesh, tol); },
           py::arg("tol") = 1e-10)
      .def("total_area", &Mesh::total_area);

  m.def("structured_mesh",
        [](std::size_t nx, std::size_t ny, DiagonalRule rule) { return build_structured_mesh(nx, ny, Rectangle{}, rule); },
        py::arg("nx"), py::arg("ny"), py::arg("diagonal") = DiagonalRule::SouthWestToNorthEast,
        "Unit-square mesh of 2*nx*ny triangles.");

  py::class_<State>(m, "State")
      .def(py::init<>())
      .def_readwrite("u", &State::u)
      .def_readwrite("w", &State::w)
      .def_readwrite("p", &State::p)
      .def_readwrite("t", &State::t);

  py::class_<JumpOptions>(m, "JumpOptions")
      .def(py::init<>())
      .def_readwrite("include_boundary", &JumpOptions::include_boundary)
      .def_readwrite("normal_component_only", &JumpOptions::normal_component_only);

  py::class_<ConvergenceOptions>(m, "ConvergenceOptions")
      .def(py::init<>())
      .def_readwrite("young", &ConvergenceOptions::young)
      .def_readwrite("poisson", &ConvergenceOptions::poisson)
      .def_readwrite("conductivity", &ConvergenceOptions::conductivity)
      .def_readwrite("gamma1", &ConvergenceOptions::gamma1)
      .def_readwrite("final_time", &ConvergenceOptions::final_time)
      .def_readwrite("diagonal", &ConvergenceOptions::diagonal)
      .def_readwrite("jump", &ConvergenceOptions::jump);

  py::class_<ConvergenceLevel>(m, "ConvergenceLevel")
      .def_readonly("nx", &ConvergenceLevel::nx)
      .def_readonly("nt", &ConvergenceLevel::nt)
      .def_readonly("tau", &ConvergenceLevel::tau)
      .def_readonly("err_u_energy", &ConvergenceLevel::err_u_energy)
      .def_readonly("err_p_l2", &ConvergenceLevel::err_p_l2)
      .def_readonly("rate_u", &ConvergenceLevel::rate_u)
      .def_readonly("rate_p", &ConvergenceLevel::rate_p);

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("levels", &ConvergenceReport::levels)
      .def_readonly("mode", &ConvergenceReport::mode)
      .def("to_csv", [](const ConvergenceReport& r) {
        std::ostringstream s;
        write_convergence_csv(s, r);
        return s.str();
      });

  py::class_<ManufacturedRun>(m, "ManufacturedRun")
      .def_readonly("mesh", &ManufacturedRun::mesh)
      .def_readonly("state", &ManufacturedRun::state)
      .def_readonly("err_u_energy", &ManufacturedRun::err_u_energy)
      .def_readonly("err_p_l2", &ManufacturedRun::err_p_l2);

  m.def("default_convergence_levels", &default_convergence_levels);
  m.def("run_manufactured", &run_manufactured, py::arg("nx"), py::arg("nt"), py::arg("mode") = MassMode::Lumped,
        py::arg("options") = ConvergenceOptions{}, py::call_guard<py::gil_scoped_release>());
  m.def(
      "convergence_study",
      [](const std::vector<std::pair<std::size_t, std::size_t>>& levels, MassMode mode, const ConvergenceOptions& o) {
        return convergence_study(levels, mode, o);
      },
      py::arg("levels"), py::arg("mode") = MassMode::Lumped, py::arg("options") = ConvergenceOptions{},
      py::call_guard<py::gil_scoped_release>());

  py::class_<FootingOptions>(m, "FootingOptions")
      .def(py::init<>())
      .def_readwrite("lam", &FootingOptions::lambda)
      .def_readwrite("mu", &FootingOptions::mu)
      .def_readwrite("kappa", &FootingOptions::kappa)
      .def_readwrite("checker_low", &FootingOptions::checker_low)
      .def_readwrite("checker_high", &FootingOptions::checker_high)
      .def_readwrite("tau", &FootingOptions::tau)
      .def_readwrite("gamma1", &FootingOptions::gamma1)
      .def_readwrite("diagonal", &FootingOptions::diagonal)
      .def_readwrite("jump", &FootingOptions::jump);

  py::class_<OscillationMetrics>(m, "OscillationMetrics")
      .def_readonly("min_pressure", &OscillationMetrics::min_pressure)
      .def_readonly("max_pressure", &OscillationMetrics::max_pressure)
      .def_readonly("undershoot", &OscillationMetrics::undershoot);

  py::class_<FootingResult>(m, "FootingResult")
      .def_readonly("mesh", &FootingResult::mesh)
      .def_readonly("state", &FootingResult::state)
      .def_readonly("metrics", &FootingResult::metrics);

  m.def("footing_case", &footing_case, py::arg("nx"), py::arg("mode") = MassMode::Lumped,
        py::arg("kappa") = KappaSpec::Homogeneous, py::arg("options") = FootingOptions{},
        py::call_guard<py::gil_scoped_release>());
  m.def("oscillation_metric", &oscillation_metric, py::arg("p"), py::arg("mesh"));

  // One footing step through either the three-field or the flux-eliminated
  // operator; returns (state, relative residual of the full system).
  m.def(
      "footing_step",
      [](std::size_t nx, MassMode mode, KappaSpec kappa, const FootingOptions& o, bool eliminate_flux) {
        const FootingProblem prob = footing_problem(nx, kappa, o);
        const BiotSystem sys = BiotSystem::build(prob.mesh, prob.dofs, prob.material, prob.bc, o.tau, mode, o.jump);
        const State prev = State::zero(prob.dofs);
        const State s = eliminate_flux ? eliminate_darcy(sys).step(prev, prob.g, prob.f) : sys.step(prev, prob.g, prob.f);
        return py::make_tuple(s, sys.full_residual(s, prev, prob.g, prob.f));
      },
      py::arg("nx"), py::arg("mode") = MassMode::Lumped, py::arg("kappa") = KappaSpec::Homogeneous,
      py::arg("options") = FootingOptions{}, py::arg("eliminate_flux") = false);

  m.def("lame_from_E_nu", &lame_from_E_nu, py::arg("E"), py::arg("nu"));
  m.def(
      "manufactured_sources",
      [](double lambda, double mu, double conductivity) {
        const auto src = manufactured_sources(sine_manufactured_solution(), lambda, mu, conductivity);
        auto g = [src](double x, double y, double t) { return Eigen::Vector2d(src.g(Point(x, y), t)); };
        auto f = [src](double x, double y, double t) { return src.f(Point(x, y), t); };
        return py::make_tuple(py::cpp_function(g, py::arg("x"), py::arg("y"), py::arg("t")),
                              py::cpp_function(f, py::arg("x"), py::arg("y"), py::arg("t")));
      },
      py::arg("lam"), py::arg("mu"), py::arg("conductivity"),
      "Returns callables (g, f) of the sine manufactured problem.");

  m.def("cr_vertex_values", [](const Mesh& mesh, const Vector& u) {
    const auto vals = cr_vertex_values(mesh, u);
    Eigen::MatrixXd out(vals.size(), 2);
    for (std::size_t v = 0; v < vals.size(); ++v) out.row(v) = vals[v].transpose();
    return out;
  });
  m.def(
      "write_vtk",
      [](const std::string& path, const Mesh& mesh, const State& state) {
        write_vtk_file(path, mesh, {{"pressure", state.p}}, {{"displacement", cr_vertex_values(mesh, state.u)}});
      },
      py::arg("path"), py::arg("mesh"), py::arg("state"));
  m.def(
      "write_state_csv",
      [](const std::string& path, const State& s) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open " + path);
        write_state_csv(out, s);
      },
      py::arg("path"), py::arg("state"));
  m.def(
      "read_state_csv",
      [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        return read_state_csv(in);
      },
      py::arg("path"));
}
