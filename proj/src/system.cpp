#include "biotcr/system.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace biotcr {

namespace {

Vector zeros(std::size_t n) { return Vector::Zero(static_cast<Eigen::Index>(n)); }

template <class Fn>
void for_each_nonzero(const SparseMatrix& m, Fn&& fn) {
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) fn(it.row(), it.col(), it.value());
  }
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

State State::zero(const DofMap& dofs, double t) {
  return State{zeros(dofs.n_u), zeros(dofs.n_w), zeros(dofs.n_p), t};
}

std::vector<std::size_t> merge_degenerate_pressures(const Mesh& mesh,
                                                    const std::vector<std::size_t>& degenerate) {
  std::vector<std::size_t> parent(mesh.num_cells());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t e : degenerate) {
    const Face& f = mesh.face(e);
    if (!f.t_minus) throw std::invalid_argument("merge_degenerate_pressures: boundary face " + std::to_string(e));
    const std::size_t a = find_root(parent, f.t_plus);
    const std::size_t b = find_root(parent, *f.t_minus);
    if (a == b) {
      throw std::logic_error("merge_degenerate_pressures: degenerate faces form a cycle at face " +
                             std::to_string(e));
    }
    parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> rep(mesh.num_cells());
  for (std::size_t c = 0; c < rep.size(); ++c) rep[c] = find_root(parent, c);
  return rep;
}

BiotSystem BiotSystem::build(const Mesh& mesh, const DofMap& dofs, const MaterialField& material,
                             const BoundarySpec& bc, double tau, MassMode mode, const JumpOptions& jump) {
  if (!(tau > 0.0)) throw std::invalid_argument("BiotSystem: time step must be positive");
  material.validate(mesh.num_cells());
  if (!bc.any_clamped()) {
    throw SolverError("BiotSystem: singular system, no clamped boundary segment "
                      "(rigid translations lie in the kernel)");
  }
  if (!bc.any_drained()) {
    throw SolverError("BiotSystem: singular system, no drained boundary segment "
                      "(pressure is determined only up to a constant)");
  }

  BiotSystem sys;
  sys.dofs_ = dofs;
  sys.tau_ = tau;
  sys.mode_ = mode;
  sys.A_ = assemble_elasticity(mesh, dofs, material).to_sparse() +
           assemble_jump(mesh, dofs, material, bc, jump).to_sparse();
  sys.M_ = (mode == MassMode::Lumped ? assemble_rt_mass_lumped(mesh, dofs, material)
                                     : assemble_rt_mass_consistent(mesh, dofs, material))
               .to_sparse();
  sys.B1_ = assemble_div_u(mesh, dofs).to_sparse();
  sys.B2_ = assemble_div_w(mesh, dofs).to_sparse();
  sys.r_w_ = assemble_flux_boundary(mesh, dofs, bc);

  if (mode == MassMode::Lumped) sys.removed_faces_ = degenerate_faces(mesh);
  sys.representative_ = merge_degenerate_pressures(mesh, sys.removed_faces_);
  sys.build_layout(mesh);
  sys.assemble_block();
  sys.solver_ = std::make_shared<const SparseDirectSolver>(sys.K_);
  return sys;
}

void BiotSystem::build_layout(const Mesh& mesh) {
  u_index_.assign(dofs_.n_u, -1);
  for (std::size_t i = 0; i < dofs_.n_u; ++i) {
    if (!dofs_.essential_u[i]) {
      u_index_[i] = static_cast<long>(u_free_.size());
      u_free_.push_back(i);
    }
  }
  std::vector<bool> removed(dofs_.n_w, false);
  for (std::size_t e : removed_faces_) removed[e] = true;
  w_index_.assign(dofs_.n_w, -1);
  for (std::size_t i = 0; i < dofs_.n_w; ++i) {
    if (!dofs_.essential_w[i] && !removed[i]) {
      w_index_[i] = static_cast<long>(w_retained_.size());
      w_retained_.push_back(i);
    }
  }
  if (mode_ == MassMode::Lumped) {
    for (std::size_t i : w_retained_) {
      if (!(M_.coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) > 0.0)) {
        throw std::invalid_argument("BiotSystem: lumped mass is not positive on flux dof " +
                                    std::to_string(i) + " (non-Delaunay mesh?)");
      }
    }
  }

  group_.assign(mesh.num_cells(), 0);
  std::vector<std::size_t> group_of_rep(mesh.num_cells(), 0);
  n_q_ = 0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    if (representative_[c] == c) group_of_rep[c] = n_q_++;
    group_[c] = group_of_rep[representative_[c]];
  }
}

void BiotSystem::assemble_block() {
  const auto n_uf = static_cast<Eigen::Index>(u_free_.size());
  const auto n_wr = static_cast<Eigen::Index>(w_retained_.size());
  const auto n_q = static_cast<Eigen::Index>(n_q_);

  std::vector<Eigen::Triplet<double>> ta, tm, tb1, tb2;
  for_each_nonzero(A_, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (u_index_[r] >= 0 && u_index_[c] >= 0) ta.emplace_back(u_index_[r], u_index_[c], v);
  });
  for_each_nonzero(M_, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (w_index_[r] >= 0 && w_index_[c] >= 0) tm.emplace_back(w_index_[r], w_index_[c], v);
  });
  for_each_nonzero(B1_, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (u_index_[c] >= 0) tb1.emplace_back(static_cast<Eigen::Index>(group_[r]), u_index_[c], v);
  });
  for_each_nonzero(B2_, [&](Eigen::Index r, Eigen::Index c, double v) {
    if (w_index_[c] >= 0) tb2.emplace_back(static_cast<Eigen::Index>(group_[r]), w_index_[c], v);
  });
  A_ff_.resize(n_uf, n_uf);
  A_ff_.setFromTriplets(ta.begin(), ta.end());
  M_rr_.resize(n_wr, n_wr);
  M_rr_.setFromTriplets(tm.begin(), tm.end());
  B1_q_.resize(n_q, n_uf);
  B1_q_.setFromTriplets(tb1.begin(), tb1.end());
  B2_q_.resize(n_q, n_wr);
  B2_q_.setFromTriplets(tb2.begin(), tb2.end());

  const Eigen::Index ow = n_uf;
  const Eigen::Index oq = n_uf + n_wr;
  std::vector<Eigen::Triplet<double>> tk;
  tk.reserve(ta.size() + tm.size() + 2 * (tb1.size() + tb2.size()));
  for (const auto& t : ta) tk.emplace_back(t.row(), t.col(), t.value());
  for (const auto& t : tm) tk.emplace_back(ow + t.row(), ow + t.col(), tau_ * t.value());
  for (const auto& t : tb1) {
    tk.emplace_back(t.col(), oq + t.row(), -t.value());
    tk.emplace_back(oq + t.row(), t.col(), -t.value());
  }
  for (const auto& t : tb2) {
    tk.emplace_back(ow + t.col(), oq + t.row(), -tau_ * t.value());
    tk.emplace_back(oq + t.row(), ow + t.col(), -tau_ * t.value());
  }
  K_.resize(oq + n_q, oq + n_q);
  K_.setFromTriplets(tk.begin(), tk.end());
  K_.makeCompressed();
}

Vector BiotSystem::restricted_rhs(const State& prev, const Vector& g, const Vector& f) const {
  if (static_cast<std::size_t>(g.size()) != dofs_.n_u || static_cast<std::size_t>(f.size()) != dofs_.n_p ||
      static_cast<std::size_t>(prev.u.size()) != dofs_.n_u) {
    throw std::invalid_argument("BiotSystem::step: load or state size mismatch");
  }
  const std::size_t n_uf = u_free_.size();
  const std::size_t n_wr = w_retained_.size();
  Vector b = zeros(n_uf + n_wr + n_q_);
  for (std::size_t i = 0; i < n_uf; ++i) b[static_cast<Eigen::Index>(i)] = g[static_cast<Eigen::Index>(u_free_[i])];
  for (std::size_t i = 0; i < n_wr; ++i) {
    b[static_cast<Eigen::Index>(n_uf + i)] = tau_ * r_w_[static_cast<Eigen::Index>(w_retained_[i])];
  }
  const Vector cell_rhs = tau_ * f - B1_ * prev.u;
  for (std::size_t c = 0; c < group_.size(); ++c) {
    b[static_cast<Eigen::Index>(n_uf + n_wr + group_[c])] += cell_rhs[static_cast<Eigen::Index>(c)];
  }
  return b;
}

State BiotSystem::expand(const Vector& u_free, const Vector& w_retained, const Vector& q, const State& prev,
                         const Vector& f) const {
  State s = State::zero(dofs_, prev.t + tau_);
  for (std::size_t i = 0; i < u_free_.size(); ++i) {
    s.u[static_cast<Eigen::Index>(u_free_[i])] = u_free[static_cast<Eigen::Index>(i)];
  }
  for (std::size_t i = 0; i < w_retained_.size(); ++i) {
    s.w[static_cast<Eigen::Index>(w_retained_[i])] = w_retained[static_cast<Eigen::Index>(i)];
  }
  for (std::size_t c = 0; c < group_.size(); ++c) {
    s.p[static_cast<Eigen::Index>(c)] = q[static_cast<Eigen::Index>(group_[c])];
  }
  reconstruct_removed_fluxes(s, prev, f);
  return s;
}

// Each removed flux follows from the balance of a cell whose other fluxes are
// known; peeling leaves of each merged group resolves chains.
void BiotSystem::reconstruct_removed_fluxes(State& state, const State& prev, const Vector& f) const {
  if (removed_faces_.empty()) return;
  const std::size_t n_cells = dofs_.n_p;
  std::vector<std::vector<std::size_t>> cell_removed(n_cells);
  std::vector<std::array<std::size_t, 2>> cells_of(removed_faces_.size());
  for (std::size_t i = 0; i < removed_faces_.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(removed_faces_[i]);
    std::array<std::size_t, 2> pm{};
    for (SparseMatrix::InnerIterator it(B2_, col); it; ++it) {
      pm[it.value() > 0.0 ? 0 : 1] = static_cast<std::size_t>(it.row());
    }
    cells_of[i] = pm;
    cell_removed[pm[0]].push_back(i);
    cell_removed[pm[1]].push_back(i);
  }

  const Vector target = (-(B1_ * (state.u - prev.u)) - tau_ * f) / tau_;
  Vector partial = B2_ * state.w;
  std::vector<int> unknown(n_cells, 0);
  for (std::size_t c = 0; c < n_cells; ++c) unknown[c] = static_cast<int>(cell_removed[c].size());
  std::vector<bool> resolved(removed_faces_.size(), false);
  std::vector<std::size_t> leaves;
  for (std::size_t c = 0; c < n_cells; ++c) {
    if (unknown[c] == 1) leaves.push_back(c);
  }
  std::size_t done = 0;
  while (!leaves.empty()) {
    const std::size_t c = leaves.back();
    leaves.pop_back();
    if (unknown[c] != 1) continue;
    std::size_t i = 0;
    for (std::size_t k : cell_removed[c]) {
      if (!resolved[k]) i = k;
    }
    const auto ci = static_cast<Eigen::Index>(c);
    const double sign = (cells_of[i][0] == c) ? 1.0 : -1.0;
    const double value = (target[ci] - partial[ci]) / sign;
    state.w[static_cast<Eigen::Index>(removed_faces_[i])] = value;
    resolved[i] = true;
    ++done;
    partial[static_cast<Eigen::Index>(cells_of[i][0])] += value;
    partial[static_cast<Eigen::Index>(cells_of[i][1])] -= value;
    for (std::size_t cell : cells_of[i]) {
      if (--unknown[cell] == 1) leaves.push_back(cell);
    }
  }
  if (done != removed_faces_.size()) throw std::logic_error("flux reconstruction: merged cells form a cycle");
}

State BiotSystem::step(const State& prev, const Vector& g, const Vector& f) const {
  const Vector b = restricted_rhs(prev, g, f);
  Vector x;
  try {
    x = solver_->solve(b, 1e-9);
  } catch (const SolverError& e) {
    std::ostringstream msg;
    msg << "BiotSystem::step at t = " << prev.t + tau_ << ": " << e.what();
    throw SolverError(msg.str());
  }
  const auto n_uf = static_cast<Eigen::Index>(u_free_.size());
  const auto n_wr = static_cast<Eigen::Index>(w_retained_.size());
  return expand(x.head(n_uf), x.segment(n_uf, n_wr), x.tail(static_cast<Eigen::Index>(n_q_)), prev, f);
}

double BiotSystem::full_residual(const State& s, const State& prev, const Vector& g, const Vector& f) const {
  const Vector ru = A_ * s.u - B1_.transpose() * s.p - g;
  const Vector rw = tau_ * (M_ * s.w - B2_.transpose() * s.p - r_w_);
  const Vector cell_rhs = tau_ * f - B1_ * prev.u;
  const Vector rp = -(B1_ * s.u) - tau_ * (B2_ * s.w) - cell_rhs;
  double res2 = rp.squaredNorm();
  double rhs2 = cell_rhs.squaredNorm();
  for (std::size_t i = 0; i < dofs_.n_u; ++i) {
    if (dofs_.essential_u[i]) continue;
    const auto k = static_cast<Eigen::Index>(i);
    res2 += ru[k] * ru[k];
    rhs2 += g[k] * g[k];
  }
  for (std::size_t i = 0; i < dofs_.n_w; ++i) {
    if (dofs_.essential_w[i]) continue;
    const auto k = static_cast<Eigen::Index>(i);
    res2 += rw[k] * rw[k];
    rhs2 += tau_ * tau_ * r_w_[k] * r_w_[k];
  }
  return rhs2 > 0.0 ? std::sqrt(res2 / rhs2) : std::sqrt(res2);
}

Vector BiotSystem::mass_balance_residual(const State& s, const State& prev, const Vector& f) const {
  return -(B1_ * (s.u - prev.u)) / tau_ - B2_ * s.w - f;
}

DarcyEliminatedSystem::DarcyEliminatedSystem(const BiotSystem& system) : system_(&system) {
  if (system.mass_mode() != MassMode::Lumped) {
    throw std::invalid_argument("eliminate_darcy: requires the lumped (diagonal) flux mass");
  }
  const Eigen::Index n_wr = system.M_rr_.rows();
  m_inv_ = Vector::Zero(n_wr);
  for (Eigen::Index i = 0; i < n_wr; ++i) m_inv_[i] = 1.0 / system.M_rr_.coeff(i, i);

  const SparseMatrix scaled = system.B2_q_ * m_inv_.asDiagonal();
  schur_ = -system.tau() * SparseMatrix(scaled * system.B2_q_.transpose());
  schur_.makeCompressed();

  const Eigen::Index n_uf = system.A_ff_.rows();
  const Eigen::Index n_q = schur_.rows();
  std::vector<Eigen::Triplet<double>> tk;
  for_each_nonzero(system.A_ff_, [&](Eigen::Index r, Eigen::Index c, double v) { tk.emplace_back(r, c, v); });
  for_each_nonzero(system.B1_q_, [&](Eigen::Index r, Eigen::Index c, double v) {
    tk.emplace_back(c, n_uf + r, -v);
    tk.emplace_back(n_uf + r, c, -v);
  });
  for_each_nonzero(schur_, [&](Eigen::Index r, Eigen::Index c, double v) { tk.emplace_back(n_uf + r, n_uf + c, v); });
  K_.resize(n_uf + n_q, n_uf + n_q);
  K_.setFromTriplets(tk.begin(), tk.end());
  K_.makeCompressed();
  solver_ = std::make_shared<const SparseDirectSolver>(K_);
}

State DarcyEliminatedSystem::step(const State& prev, const Vector& g, const Vector& f) const {
  const BiotSystem& sys = *system_;
  const Vector full_rhs = sys.restricted_rhs(prev, g, f);
  const Eigen::Index n_uf = sys.A_ff_.rows();
  const Eigen::Index n_wr = sys.M_rr_.rows();
  const Eigen::Index n_q = schur_.rows();

  Vector r_w(n_wr);
  for (Eigen::Index i = 0; i < n_wr; ++i) r_w[i] = sys.r_w_[static_cast<Eigen::Index>(sys.w_retained_[i])];

  Vector b(n_uf + n_q);
  b.head(n_uf) = full_rhs.head(n_uf);
  b.tail(n_q) = full_rhs.tail(n_q) + sys.tau() * (sys.B2_q_ * m_inv_.cwiseProduct(r_w));
  const Vector x = solver_->solve(b, 1e-9);
  const Vector q = x.tail(n_q);
  const Vector w = m_inv_.cwiseProduct(sys.B2_q_.transpose() * q + r_w);
  return sys.expand(x.head(n_uf), w, q, prev, f);
}

DarcyEliminatedSystem eliminate_darcy(const BiotSystem& system) { return DarcyEliminatedSystem(system); }

std::vector<State> run_transient(const BiotSystem& system, const State& initial, const TransientLoads& loads,
                                 std::size_t n_t) {
  std::vector<State> trajectory;
  trajectory.reserve(n_t + 1);
  trajectory.push_back(initial);
  for (std::size_t n = 1; n <= n_t; ++n) {
    const double t = initial.t + static_cast<double>(n) * system.tau();
    try {
      State next = system.step(trajectory.back(), loads.g(t), loads.f(t));
      next.t = t;
      trajectory.push_back(std::move(next));
    } catch (const SolverError& e) {
      throw SolverError("run_transient: step " + std::to_string(n) + ": " + e.what());
    }
  }
  return trajectory;
}

}  // namespace biotcr
