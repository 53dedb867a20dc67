#include "biotcr/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "biotcr/quadrature.hpp"

namespace biotcr {

MaterialField MaterialField::uniform(std::size_t num_cells, double lambda, double mu,
                                     double conductivity, double gamma1) {
  MaterialField m;
  m.lambda.assign(num_cells, lambda);
  m.mu.assign(num_cells, mu);
  m.conductivity.assign(num_cells, conductivity);
  m.gamma1 = gamma1;
  return m;
}

void MaterialField::validate(std::size_t num_cells) const {
  if (lambda.size() != num_cells || mu.size() != num_cells || conductivity.size() != num_cells) {
    throw std::invalid_argument("MaterialField: per-cell arrays do not match the mesh");
  }
  for (std::size_t c = 0; c < num_cells; ++c) {
    if (!(mu[c] > 0.0) || !(lambda[c] >= 0.0) || !(conductivity[c] > 0.0)) {
      throw std::invalid_argument("MaterialField: invalid parameters on cell " + std::to_string(c));
    }
  }
  if (!(gamma1 >= 0.0)) throw std::invalid_argument("MaterialField: gamma1 must be nonnegative");
}

std::pair<double, double> lame_from_E_nu(double E, double nu) {
  if (!(E > 0.0)) throw std::invalid_argument("lame_from_E_nu: E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("lame_from_E_nu: nu must lie in (-1, 0.5)");
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  const double mu = E / (2.0 * (1.0 + nu));
  return {lambda, mu};
}

void TripletMatrix::add(std::size_t row, std::size_t col, double value) {
  if (row >= rows_ || col >= cols_) throw std::out_of_range("TripletMatrix::add: index out of range");
  entries_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
}

SparseMatrix TripletMatrix::to_sparse() const {
  SparseMatrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  m.setFromTriplets(entries_.begin(), entries_.end());
  m.makeCompressed();
  return m;
}

TripletMatrix assemble_elasticity(const Mesh& mesh, const DofMap& dofs, const MaterialField& material) {
  TripletMatrix a(dofs.n_u, dofs.n_u);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double area = mesh.cell_area(c);
    const double mu = material.mu[c];
    const double lambda = material.lambda[c];
    std::array<Eigen::Matrix2d, 6> grad;
    std::array<std::size_t, 6> index{};
    for (int j = 0; j < 3; ++j) {
      const Point g = cr_basis_gradient(mesh, c, j);
      for (int k = 0; k < 2; ++k) {
        Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
        G.row(k) = g.transpose();
        grad[2 * j + k] = G;
        index[2 * j + k] = DofMap::u_dof(mesh.cell_faces(c)[j].face, k);
      }
    }
    for (int r = 0; r < 6; ++r) {
      const Eigen::Matrix2d er = 0.5 * (grad[r] + grad[r].transpose());
      for (int s = 0; s < 6; ++s) {
        const Eigen::Matrix2d es = 0.5 * (grad[s] + grad[s].transpose());
        const double value =
            area * (2.0 * mu * (er.cwiseProduct(es)).sum() + lambda * grad[r].trace() * grad[s].trace());
        a.add(index[r], index[s], value);
      }
    }
  }
  return a;
}

namespace {

Point point_on_face(const Mesh& mesh, std::size_t face, double s) {
  const Face& f = mesh.face(face);
  return (1.0 - s) * mesh.vertex(f.endpoints[0]) + s * mesh.vertex(f.endpoints[1]);
}

void add_cell_trace(const Mesh& mesh, std::size_t cell, const Point& x, double scale,
                    FaceTraceStencil& stencil) {
  const Barycentric b = barycentric(mesh, cell, x);
  for (int j = 0; j < 3; ++j) {
    stencil.terms.emplace_back(mesh.cell_faces(cell)[j].face, scale * cr_basis_eval(j, b));
  }
}

double face_mu(const Mesh& mesh, std::size_t face, const MaterialField& material) {
  const Face& f = mesh.face(face);
  if (f.is_boundary()) return material.mu[f.t_plus];
  return 0.5 * (material.mu[f.t_plus] + material.mu[*f.t_minus]);
}

}  // namespace

FaceTraceStencil jump_stencil(const Mesh& mesh, std::size_t face, double s, bool clamped_boundary) {
  const Face& f = mesh.face(face);
  const Point x = point_on_face(mesh, face, s);
  FaceTraceStencil stencil;
  add_cell_trace(mesh, f.t_plus, x, 1.0, stencil);
  if (f.t_minus) {
    add_cell_trace(mesh, *f.t_minus, x, -1.0, stencil);
  } else if (!clamped_boundary) {
    // Against the face mean: only the own basis function has nonzero mean.
    stencil.terms.emplace_back(face, -1.0);
  }
  return stencil;
}

TripletMatrix assemble_jump(const Mesh& mesh, const DofMap& dofs, const MaterialField& material,
                            const BoundarySpec& bc, const JumpOptions& options) {
  TripletMatrix a(dofs.n_u, dofs.n_u);
  if (material.gamma1 == 0.0) return a;
  const LineRule& rule = gauss_line_rule(2);
  for (std::size_t e = 0; e < mesh.num_faces(); ++e) {
    const Face& f = mesh.face(e);
    bool clamped = false;
    if (f.is_boundary()) {
      if (!options.include_boundary) continue;
      clamped = bc.at(mesh.boundary_tag(e)).clamped;
    }
    // h_e^{-1} int_e = sum_q w_q (|e| / h_e) with h_e = |e|.
    const double factor = 2.0 * face_mu(mesh, e, material) * material.gamma1;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const FaceTraceStencil st = jump_stencil(mesh, e, rule.points[q], clamped);
      const double w = factor * rule.weights[q];
      for (const auto& [fi, ci] : st.terms) {
        for (const auto& [fj, cj] : st.terms) {
          if (options.normal_component_only) {
            for (int k = 0; k < 2; ++k) {
              for (int l = 0; l < 2; ++l) {
                a.add(DofMap::u_dof(fi, k), DofMap::u_dof(fj, l), w * ci * cj * f.normal[k] * f.normal[l]);
              }
            }
          } else {
            for (int k = 0; k < 2; ++k) a.add(DofMap::u_dof(fi, k), DofMap::u_dof(fj, k), w * ci * cj);
          }
        }
      }
    }
  }
  return a;
}

TripletMatrix assemble_div_u(const Mesh& mesh, const DofMap& dofs) {
  TripletMatrix b(dofs.n_p, dofs.n_u);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    for (int j = 0; j < 3; ++j) {
      const std::size_t face = mesh.cell_faces(c)[j].face;
      const Point flux = mesh.face(face).length * mesh.outward_normal(c, j);
      b.add(DofMap::p_dof(c), DofMap::u_dof(face, 0), flux.x());
      b.add(DofMap::p_dof(c), DofMap::u_dof(face, 1), flux.y());
    }
  }
  return b;
}

TripletMatrix assemble_div_w(const Mesh& mesh, const DofMap& dofs) {
  TripletMatrix b(dofs.n_p, dofs.n_w);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    for (const CellFace& cf : mesh.cell_faces(c)) {
      b.add(DofMap::p_dof(c), DofMap::w_dof(cf.face), static_cast<double>(cf.sign));
    }
  }
  return b;
}

TripletMatrix assemble_rt_mass_consistent(const Mesh& mesh, const DofMap& dofs,
                                          const MaterialField& material) {
  TripletMatrix m(dofs.n_w, dofs.n_w);
  const QuadratureRule& rule = triangle_rule(2);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const double scale = mesh.cell_area(c) / material.conductivity[c];
    const auto& cf = mesh.cell_faces(c);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = from_barycentric(mesh, c, rule.points[q]);
      std::array<Point, 3> psi;
      for (int j = 0; j < 3; ++j) psi[j] = rt0_basis_eval(c, cf[j].face, x, mesh);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) local(i, j) += rule.weights[q] * psi[i].dot(psi[j]);
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m.add(DofMap::w_dof(cf[i].face), DofMap::w_dof(cf[j].face), scale * local(i, j));
    }
  }
  return m;
}

double face_conductivity(std::size_t face, const Mesh& mesh, const MaterialField& material) {
  const Face& f = mesh.face(face);
  const double k_plus = material.conductivity[f.t_plus];
  if (f.is_boundary() || std::abs(f.d_e) < 1e-10 * f.length) return k_plus;
  const double resistance = f.d_plus / k_plus + f.d_minus / material.conductivity[*f.t_minus];
  if (resistance == 0.0) return k_plus;
  return f.d_e / resistance;
}

TripletMatrix assemble_rt_mass_lumped(const Mesh& mesh, const DofMap& dofs,
                                      const MaterialField& material) {
  TripletMatrix m(dofs.n_w, dofs.n_w);
  for (std::size_t e = 0; e < mesh.num_faces(); ++e) {
    const Face& f = mesh.face(e);
    const double value = 2.0 * f.omega / (f.length * f.length * face_conductivity(e, mesh, material));
    m.add(DofMap::w_dof(e), DofMap::w_dof(e), value);
  }
  return m;
}

Vector assemble_load_g(const Mesh& mesh, const DofMap& dofs, const VectorField& body_force,
                       const BoundarySpec& bc, double time) {
  Vector load = Vector::Zero(static_cast<Eigen::Index>(dofs.n_u));
  if (body_force) {
    const QuadratureRule& rule = triangle_rule(4);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const double area = mesh.cell_area(c);
      for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const Point g = body_force(from_barycentric(mesh, c, rule.points[q]), time);
        for (int j = 0; j < 3; ++j) {
          const double phi = cr_basis_eval(j, rule.points[q]);
          const std::size_t face = mesh.cell_faces(c)[j].face;
          for (int k = 0; k < 2; ++k) load[DofMap::u_dof(face, k)] += rule.weights[q] * area * g[k] * phi;
        }
      }
    }
  }
  const LineRule& line = gauss_line_rule(2);
  for (std::size_t e = 0; e < mesh.num_faces(); ++e) {
    const BoundaryTag tag = mesh.boundary_tag(e);
    if (tag == BoundaryTag::Interior) continue;
    const SegmentCondition& cond = bc.at(tag);
    if (cond.clamped) continue;
    const Face& f = mesh.face(e);
    for (std::size_t q = 0; q < line.points.size(); ++q) {
      const Barycentric b = barycentric(mesh, f.t_plus, point_on_face(mesh, e, line.points[q]));
      for (int j = 0; j < 3; ++j) {
        const double phi = cr_basis_eval(j, b);
        const std::size_t face = mesh.cell_faces(f.t_plus)[j].face;
        for (int k = 0; k < 2; ++k) {
          load[DofMap::u_dof(face, k)] += line.weights[q] * f.length * cond.traction[k] * phi;
        }
      }
    }
  }
  return load;
}

Vector assemble_source_f(const Mesh& mesh, const DofMap& dofs, const ScalarField& source, double time) {
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(dofs.n_p));
  if (!source) return rhs;
  const QuadratureRule& rule = triangle_rule(4);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      sum += rule.weights[q] * source(from_barycentric(mesh, c, rule.points[q]), time);
    }
    rhs[DofMap::p_dof(c)] = sum * mesh.cell_area(c);
  }
  return rhs;
}

Vector assemble_flux_boundary(const Mesh& mesh, const DofMap& dofs, const BoundarySpec& bc) {
  Vector rhs = Vector::Zero(static_cast<Eigen::Index>(dofs.n_w));
  for (std::size_t e = 0; e < mesh.num_faces(); ++e) {
    const BoundaryTag tag = mesh.boundary_tag(e);
    if (tag == BoundaryTag::Interior) continue;
    const SegmentCondition& cond = bc.at(tag);
    if (cond.drained) rhs[DofMap::w_dof(e)] = -cond.pressure;
  }
  return rhs;
}

}  // namespace biotcr
