#include "biotcr/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace biotcr {

namespace {

const char* sep = " ";

std::ostream& sci(std::ostream& out) { return out << std::scientific << std::setprecision(16); }

}  // namespace

std::vector<Point> cr_vertex_values(const Mesh& mesh, const Vector& u) {
  std::vector<Point> sum(mesh.num_vertices(), Point::Zero());
  std::vector<int> count(mesh.num_vertices(), 0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cell(c);
    const auto& cf = mesh.cell_faces(c);
    // phi_j at vertex i is 1 - 2 delta_ij.
    for (int i = 0; i < 3; ++i) {
      Point v = Point::Zero();
      for (int j = 0; j < 3; ++j) {
        const double phi = (i == j) ? -1.0 : 1.0;
        v.x() += phi * u[DofMap::u_dof(cf[j].face, 0)];
        v.y() += phi * u[DofMap::u_dof(cf[j].face, 1)];
      }
      sum[tri[i]] += v;
      ++count[tri[i]];
    }
  }
  for (std::size_t v = 0; v < sum.size(); ++v) {
    if (count[v] > 0) sum[v] /= static_cast<double>(count[v]);
  }
  return sum;
}

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<VtkCellScalar>& cell_data,
               const std::vector<VtkPointVector>& point_data, const std::string& title) {
  sci(out);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Point& p : mesh.vertices()) out << p.x() << sep << p.y() << sep << 0.0 << '\n';
  out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const auto& tri : mesh.cells()) out << "3 " << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) out << "5\n";

  if (!cell_data.empty()) {
    out << "CELL_DATA " << mesh.num_cells() << '\n';
    for (const auto& field : cell_data) {
      if (static_cast<std::size_t>(field.values.size()) != mesh.num_cells()) {
        throw std::invalid_argument("write_vtk: cell field '" + field.name + "' has wrong length");
      }
      out << "SCALARS " << field.name << " double 1\nLOOKUP_TABLE default\n";
      for (Eigen::Index c = 0; c < field.values.size(); ++c) out << field.values[c] << '\n';
    }
  }
  if (!point_data.empty()) {
    out << "POINT_DATA " << mesh.num_vertices() << '\n';
    for (const auto& field : point_data) {
      if (field.values.size() != mesh.num_vertices()) {
        throw std::invalid_argument("write_vtk: point field '" + field.name + "' has wrong length");
      }
      out << "VECTORS " << field.name << " double\n";
      for (const Point& v : field.values) out << v.x() << sep << v.y() << sep << 0.0 << '\n';
    }
  }
}

void write_vtk_file(const std::string& path, const Mesh& mesh, const std::vector<VtkCellScalar>& cell_data,
                    const std::vector<VtkPointVector>& point_data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_vtk(out, mesh, cell_data, point_data);
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  sci(out);
  out << "nx,tau,err_u_energy,err_p_l2,rate_u,rate_p\n";
  for (const auto& level : report.levels) {
    out << level.nx << ',' << level.tau << ',' << level.err_u_energy << ',' << level.err_p_l2 << ',';
    if (level.rate_u) out << *level.rate_u;
    out << ',';
    if (level.rate_p) out << *level.rate_p;
    out << '\n';
  }
}

void write_state_csv(std::ostream& out, const State& state) {
  if (state.u.size() != 2 * state.w.size()) throw std::invalid_argument("write_state_csv: inconsistent sizes");
  sci(out);
  out << "# biotcr-state v1\n";
  out << "t," << state.t << '\n';
  out << "sizes," << state.u.size() << ',' << state.w.size() << ',' << state.p.size() << '\n';
  for (Eigen::Index f = 0; f < state.w.size(); ++f) {
    out << "u," << f << ',' << state.u[2 * f] << ',' << state.u[2 * f + 1] << '\n';
  }
  for (Eigen::Index f = 0; f < state.w.size(); ++f) out << "w," << f << ',' << state.w[f] << '\n';
  for (Eigen::Index c = 0; c < state.p.size(); ++c) out << "p," << c << ',' << state.p[c] << '\n';
}

State read_state_csv(std::istream& in) {
  auto fail = [](const std::string& why) { throw std::runtime_error("read_state_csv: " + why); };
  std::string line;
  if (!std::getline(in, line) || line != "# biotcr-state v1") fail("missing header");

  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    return parts;
  };

  State state;
  bool have_t = false, have_sizes = false;
  std::size_t seen_u = 0, seen_w = 0, seen_p = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line);
    try {
      if (parts[0] == "t" && parts.size() == 2) {
        state.t = std::stod(parts[1]);
        have_t = true;
      } else if (parts[0] == "sizes" && parts.size() == 4) {
        state.u = Vector::Zero(std::stol(parts[1]));
        state.w = Vector::Zero(std::stol(parts[2]));
        state.p = Vector::Zero(std::stol(parts[3]));
        have_sizes = true;
      } else if (!have_sizes) {
        fail("data before sizes");
      } else if (parts[0] == "u" && parts.size() == 4) {
        const long f = std::stol(parts[1]);
        if (f < 0 || 2 * f + 1 >= state.u.size()) fail("u index out of range");
        state.u[2 * f] = std::stod(parts[2]);
        state.u[2 * f + 1] = std::stod(parts[3]);
        ++seen_u;
      } else if (parts[0] == "w" && parts.size() == 3) {
        const long f = std::stol(parts[1]);
        if (f < 0 || f >= state.w.size()) fail("w index out of range");
        state.w[f] = std::stod(parts[2]);
        ++seen_w;
      } else if (parts[0] == "p" && parts.size() == 3) {
        const long c = std::stol(parts[1]);
        if (c < 0 || c >= state.p.size()) fail("p index out of range");
        state.p[c] = std::stod(parts[2]);
        ++seen_p;
      } else {
        fail("unrecognized line '" + line + "'");
      }
    } catch (const std::logic_error&) {
      fail("bad number in line '" + line + "'");
    }
  }
  if (!have_t || !have_sizes) fail("missing t or sizes");
  if (2 * seen_u != static_cast<std::size_t>(state.u.size()) || seen_w != static_cast<std::size_t>(state.w.size()) ||
      seen_p != static_cast<std::size_t>(state.p.size())) {
    fail("record count does not match sizes");
  }
  return state;
}

}  // namespace biotcr
