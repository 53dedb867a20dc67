#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "biotcr/boundary.hpp"
#include "biotcr/mesh.hpp"
#include "biotcr/spaces.hpp"

namespace biotcr {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

/// Per-cell material data. The Biot-Willis coefficient is fixed at one.
struct MaterialField {
  std::vector<double> lambda;
  std::vector<double> mu;
  std::vector<double> conductivity;  // K = kappa / eta
  double gamma1 = 0.5;

  static MaterialField uniform(std::size_t num_cells, double lambda, double mu, double conductivity,
                               double gamma1 = 0.5);
  /// Throws std::invalid_argument unless mu > 0, lambda >= 0, K > 0, gamma1 >= 0.
  void validate(std::size_t num_cells) const;
};

/// Lame parameters from Young's modulus and Poisson ratio.
std::pair<double, double> lame_from_E_nu(double E, double nu);

/// COO accumulator; duplicates are summed by to_sparse().
class TripletMatrix {
 public:
  TripletMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void add(std::size_t row, std::size_t col, double value);
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  SparseMatrix to_sparse() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Eigen::Triplet<double>> entries_;
};

enum class MassMode { Consistent, Lumped };

/// Which faces carry the jump penalty. By default every face does.
struct JumpOptions {
  bool include_boundary = true;
  bool normal_component_only = false;
};

using VectorField = std::function<Point(const Point& x, double t)>;
using ScalarField = std::function<double(const Point& x, double t)>;

/// 2 mu (eps(u), eps(v)) + lambda (div u, div v), broken gradients.
TripletMatrix assemble_elasticity(const Mesh& mesh, const DofMap& dofs, const MaterialField& material);

/// Jump coefficients of a face at a point on it, for one displacement
/// component. Interior faces: trace from T+ minus trace from T-. Boundary
/// faces: trace from T+ (clamped) or trace minus its face mean (traction).
struct FaceTraceStencil {
  std::vector<std::pair<std::size_t, double>> terms;  // (scalar face index, coefficient)
};
FaceTraceStencil jump_stencil(const Mesh& mesh, std::size_t face, double s, bool clamped_boundary);

/// 2 mu gamma1 sum_e h_e^{-1} int_e [u].[v].
TripletMatrix assemble_jump(const Mesh& mesh, const DofMap& dofs, const MaterialField& material,
                            const BoundarySpec& bc, const JumpOptions& options = {});

/// B1 (n_p x n_u): entry (T, dof) = int_T div phi_dof.
TripletMatrix assemble_div_u(const Mesh& mesh, const DofMap& dofs);

/// B2 (n_p x n_w): entry (T, e) = n_e . n_{e,T}.
TripletMatrix assemble_div_w(const Mesh& mesh, const DofMap& dofs);

/// (K^{-1} psi_e, psi_e') with exact quadrature.
TripletMatrix assemble_rt_mass_consistent(const Mesh& mesh, const DofMap& dofs,
                                          const MaterialField& material);

/// Diagonal two-point mass: entry d_e / (|e| K_e) = 2 omega_e / (|e|^2 K_e).
TripletMatrix assemble_rt_mass_lumped(const Mesh& mesh, const DofMap& dofs,
                                      const MaterialField& material);

/// Distance-weighted harmonic mean of the adjacent cell conductivities.
double face_conductivity(std::size_t face, const Mesh& mesh, const MaterialField& material);

/// (g, v) + <t, v>_{traction faces}.
Vector assemble_load_g(const Mesh& mesh, const DofMap& dofs, const VectorField& body_force,
                       const BoundarySpec& bc, double time);

/// (f, chi_T) per cell.
Vector assemble_source_f(const Mesh& mesh, const DofMap& dofs, const ScalarField& source, double time);

/// Right-hand side of the flux equation from drained boundary pressure:
/// -p_D on each drained face.
Vector assemble_flux_boundary(const Mesh& mesh, const DofMap& dofs, const BoundarySpec& bc);

}  // namespace biotcr
