#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "biotcr/assembly.hpp"
#include "biotcr/sparse_solver.hpp"

namespace biotcr {

/// Coefficients of (u, w, p) at one time level, in DofMap order.
struct State {
  Vector u;
  Vector w;
  Vector p;
  double t = 0.0;

  static State zero(const DofMap& dofs, double t = 0.0);
};

/// Backward-Euler step operator of the three-field problem,
///
///   [ A     0       -B1^T P  ] [u]   [ g                      ]
///   [ 0     tau M   -tau B2^T P] [w] = [ tau r_w               ]
///   [-P^T B1 -tau P^T B2  0  ] [q]   [ P^T (tau f - B1 u_prev) ]
///
/// restricted to free displacement and flux dofs. P expands merged pressure
/// unknowns q to cells. Essential dofs are eliminated symmetrically and
/// carry the value zero. In lumped mode the flux dofs of degenerate faces
/// (omega_e = 0) are removed and their two cells share one pressure.
class BiotSystem {
 public:
  static BiotSystem build(const Mesh& mesh, const DofMap& dofs, const MaterialField& material,
                          const BoundarySpec& bc, double tau, MassMode mode,
                          const JumpOptions& jump = {});

  State step(const State& prev, const Vector& g, const Vector& f) const;

  /// Relative residual of the unmerged block system over all non-essential
  /// rows, for a state produced from prev.
  double full_residual(const State& state, const State& prev, const Vector& g, const Vector& f) const;

  /// Per-cell -(div (u - u_prev) / tau, 1)_T - (div w, 1)_T - (f, 1)_T.
  Vector mass_balance_residual(const State& state, const State& prev, const Vector& f) const;

  double tau() const { return tau_; }
  MassMode mass_mode() const { return mode_; }
  const DofMap& dofs() const { return dofs_; }

  const SparseMatrix& A() const { return A_; }
  const SparseMatrix& M_w() const { return M_; }
  const SparseMatrix& B1() const { return B1_; }
  const SparseMatrix& B2() const { return B2_; }
  const Vector& flux_boundary_rhs() const { return r_w_; }

  /// Representative (smallest) cell of each cell's merged pressure group.
  const std::vector<std::size_t>& merge_map() const { return representative_; }
  const std::vector<std::size_t>& removed_flux_dofs() const { return removed_faces_; }
  std::size_t num_pressure_unknowns() const { return n_q_; }

  /// Assembled block operator over the retained unknowns.
  const SparseMatrix& block_operator() const { return K_; }

 private:
  friend class DarcyEliminatedSystem;

  BiotSystem() = default;
  void build_layout(const Mesh& mesh);
  void assemble_block();

  Vector restricted_rhs(const State& prev, const Vector& g, const Vector& f) const;
  State expand(const Vector& u_free, const Vector& w_retained, const Vector& q, const State& prev,
               const Vector& f) const;
  void reconstruct_removed_fluxes(State& state, const State& prev, const Vector& f) const;

  DofMap dofs_;
  double tau_ = 0.0;
  MassMode mode_ = MassMode::Consistent;

  SparseMatrix A_, M_, B1_, B2_;
  Vector r_w_;

  std::vector<long> u_index_;  // -1 for essential
  std::vector<long> w_index_;  // -1 for essential or removed
  std::vector<std::size_t> group_;
  std::vector<std::size_t> representative_;
  std::vector<std::size_t> removed_faces_;
  std::vector<std::size_t> u_free_, w_retained_;
  std::size_t n_q_ = 0;

  // Blocks restricted to retained unknowns.
  SparseMatrix A_ff_, M_rr_, B1_q_, B2_q_;
  SparseMatrix K_;
  std::shared_ptr<const SparseDirectSolver> solver_;
};

/// Union-find merge of the two pressure cells of every degenerate face.
/// Returns the representative cell per cell; throws std::logic_error if the
/// degenerate faces close a cycle.
std::vector<std::size_t> merge_degenerate_pressures(const Mesh& mesh,
                                                    const std::vector<std::size_t>& degenerate);

/// Two-field operator after eliminating the flux with a diagonal mass:
///
///   [ A         -B1^T P               ]
///   [ -P^T B1   -tau P^T B2 M^{-1} B2^T P ]
///
/// with recovery w = M^{-1} (B2^T P q + r_w). Keeps a reference to the
/// source system, which must outlive it.
class DarcyEliminatedSystem {
 public:
  /// Throws std::invalid_argument in consistent mode.
  explicit DarcyEliminatedSystem(const BiotSystem& system);

  State step(const State& prev, const Vector& g, const Vector& f) const;

  const SparseMatrix& schur_block() const { return schur_; }
  const SparseMatrix& block_operator() const { return K_; }

 private:
  const BiotSystem* system_;
  Vector m_inv_;
  SparseMatrix schur_;
  SparseMatrix K_;
  std::shared_ptr<const SparseDirectSolver> solver_;
};

DarcyEliminatedSystem eliminate_darcy(const BiotSystem& system);

/// Loads evaluated at t_n.
struct TransientLoads {
  std::function<Vector(double t)> g;
  std::function<Vector(double t)> f;
};

/// n_t backward-Euler steps from `initial`; element k of the result has
/// t = initial.t + k tau.
std::vector<State> run_transient(const BiotSystem& system, const State& initial,
                                 const TransientLoads& loads, std::size_t n_t);

}  // namespace biotcr
