#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "biotcr/boundary.hpp"
#include "biotcr/mesh.hpp"

namespace biotcr {

using Barycentric = std::array<double, 3>;

/// Degree-of-freedom layout of the three discrete spaces.
///
///  - Crouzeix-Raviart displacement: value at each face barycenter, two
///    components; dof of (face f, component k) is 2f + k.
///  - RT0 flux: e(w) = int_e w . n_e per face; dof of face f is f.
///  - P0 pressure: one value per cell; dof of cell c is c.
struct DofMap {
  std::size_t n_u = 0;
  std::size_t n_w = 0;
  std::size_t n_p = 0;
  std::vector<bool> essential_u;  // size n_u
  std::vector<bool> essential_w;  // size n_w

  static std::size_t u_dof(std::size_t face, int component) { return 2 * face + component; }
  static std::size_t w_dof(std::size_t face) { return face; }
  static std::size_t p_dof(std::size_t cell) { return cell; }

  std::vector<std::size_t> essential_u_dofs() const;
  std::vector<std::size_t> essential_w_dofs() const;
};

/// Essential displacement dofs on clamped faces, essential flux dofs on
/// impermeable faces. Throws std::invalid_argument if a boundary face's
/// segment has no entry in bc.
DofMap build_dof_map(const Mesh& mesh, const BoundarySpec& bc);

Barycentric barycentric(const Mesh& mesh, std::size_t cell, const Point& x);
Point from_barycentric(const Mesh& mesh, std::size_t cell, const Barycentric& b);

/// phi_i = 1 - 2 lambda_i; equals one on local face i.
/// Throws std::out_of_range for local_face outside 0..2.
double cr_basis_eval(int local_face, const Barycentric& point);

/// Constant gradient of the scalar CR basis function of local face i:
/// |e_i| n_{e_i,T} / |T|.
Point cr_basis_gradient(const Mesh& mesh, std::size_t cell, int local_face);

/// Lowest-order Raviart-Thomas basis function of a global face, restricted
/// to a cell: (n_e . n_{e,T}) / (2|T|) (x - x_P), P the opposite vertex.
Point rt0_basis_eval(std::size_t cell, std::size_t face, const Point& x, const Mesh& mesh);
double rt0_div(std::size_t cell, std::size_t face, const Mesh& mesh);

}  // namespace biotcr
