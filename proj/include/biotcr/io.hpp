#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "biotcr/system.hpp"
#include "biotcr/verification.hpp"

namespace biotcr {

struct VtkCellScalar {
  std::string name;
  Vector values;  // one per cell
};

struct VtkPointVector {
  std::string name;
  std::vector<Point> values;  // one per vertex
};

/// Legacy ASCII unstructured grid with triangles (VTK cell type 5).
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<VtkCellScalar>& cell_data = {},
               const std::vector<VtkPointVector>& point_data = {}, const std::string& title = "biotcr");
void write_vtk_file(const std::string& path, const Mesh& mesh, const std::vector<VtkCellScalar>& cell_data = {},
                    const std::vector<VtkPointVector>& point_data = {});

/// Vertex values of a CR field, averaging the per-cell traces at each vertex.
std::vector<Point> cr_vertex_values(const Mesh& mesh, const Vector& u);

/// Columns: nx,tau,err_u_energy,err_p_l2,rate_u,rate_p. Missing rates are
/// written as empty fields.
void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);

/// Checkpoint in CSV form:
///   # biotcr-state v1
///   t,<time>
///   sizes,<n_u>,<n_w>,<n_p>
///   u,<face>,<u_x>,<u_y>     one line per face, ascending
///   w,<face>,<flux>          one line per face, ascending
///   p,<cell>,<pressure>      one line per cell, ascending
void write_state_csv(std::ostream& out, const State& state);
/// Throws std::runtime_error on malformed input.
State read_state_csv(std::istream& in);

}  // namespace biotcr
