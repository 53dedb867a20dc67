#include "biotcr/spaces.hpp"

#include <stdexcept>
#include <string>

namespace biotcr {

std::vector<std::size_t> DofMap::essential_u_dofs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < essential_u.size(); ++i) {
    if (essential_u[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> DofMap::essential_w_dofs() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < essential_w.size(); ++i) {
    if (essential_w[i]) out.push_back(i);
  }
  return out;
}

DofMap build_dof_map(const Mesh& mesh, const BoundarySpec& bc) {
  DofMap dofs;
  dofs.n_u = 2 * mesh.num_faces();
  dofs.n_w = mesh.num_faces();
  dofs.n_p = mesh.num_cells();
  dofs.essential_u.assign(dofs.n_u, false);
  dofs.essential_w.assign(dofs.n_w, false);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const BoundaryTag tag = mesh.boundary_tag(f);
    if (tag == BoundaryTag::Interior) continue;
    const SegmentCondition& cond = bc.at(tag);
    if (cond.clamped) {
      dofs.essential_u[DofMap::u_dof(f, 0)] = true;
      dofs.essential_u[DofMap::u_dof(f, 1)] = true;
    }
    if (!cond.drained) dofs.essential_w[DofMap::w_dof(f)] = true;
  }
  return dofs;
}

Barycentric barycentric(const Mesh& mesh, std::size_t cell, const Point& x) {
  const auto& t = mesh.cell(cell);
  const Point& a = mesh.vertex(t[0]);
  const Point& b = mesh.vertex(t[1]);
  const Point& c = mesh.vertex(t[2]);
  const double area2 = 2.0 * mesh.cell_area(cell);
  auto twice_area = [](const Point& p, const Point& q, const Point& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) - (r.x() - p.x()) * (q.y() - p.y());
  };
  const double l0 = twice_area(x, b, c) / area2;
  const double l1 = twice_area(a, x, c) / area2;
  return {l0, l1, 1.0 - l0 - l1};
}

Point from_barycentric(const Mesh& mesh, std::size_t cell, const Barycentric& b) {
  const auto& t = mesh.cell(cell);
  return b[0] * mesh.vertex(t[0]) + b[1] * mesh.vertex(t[1]) + b[2] * mesh.vertex(t[2]);
}

double cr_basis_eval(int local_face, const Barycentric& point) {
  if (local_face < 0 || local_face > 2) {
    throw std::out_of_range("cr_basis_eval: local face " + std::to_string(local_face));
  }
  return 1.0 - 2.0 * point[local_face];
}

Point cr_basis_gradient(const Mesh& mesh, std::size_t cell, int local_face) {
  const double len = mesh.face(mesh.cell_faces(cell)[local_face].face).length;
  return len / mesh.cell_area(cell) * mesh.outward_normal(cell, local_face);
}

namespace {

int require_local(const Mesh& mesh, std::size_t cell, std::size_t face, const char* who) {
  const int k = mesh.local_index(cell, face);
  if (k < 0) {
    throw std::invalid_argument(std::string(who) + ": face " + std::to_string(face) +
                                " is not on cell " + std::to_string(cell));
  }
  return k;
}

}  // namespace

Point rt0_basis_eval(std::size_t cell, std::size_t face, const Point& x, const Mesh& mesh) {
  const int k = require_local(mesh, cell, face, "rt0_basis_eval");
  const int sign = mesh.cell_faces(cell)[k].sign;
  const Point& apex = mesh.vertex(mesh.cell(cell)[k]);
  return (static_cast<double>(sign) / (2.0 * mesh.cell_area(cell))) * (x - apex);
}

double rt0_div(std::size_t cell, std::size_t face, const Mesh& mesh) {
  const int k = require_local(mesh, cell, face, "rt0_div");
  return static_cast<double>(mesh.cell_faces(cell)[k].sign) / mesh.cell_area(cell);
}

}  // namespace biotcr
