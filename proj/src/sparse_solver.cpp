#include "biotcr/sparse_solver.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>
#include <limits>
#include <sstream>

namespace biotcr {

struct SparseDirectSolver::Impl {
  SparseMatrix matrix;
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
};

namespace {

// rhs - matrix * x with long double accumulation.
Vector extended_residual(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m, const Vector& x, const Vector& rhs) {
  Vector r(rhs.size());
  for (Eigen::Index i = 0; i < m.outerSize(); ++i) {
    long double acc = rhs[i];
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, i); it; ++it)
      acc -= static_cast<long double>(it.value()) * static_cast<long double>(x[it.col()]);
    r[i] = static_cast<double>(acc);
  }
  return r;
}

}  // namespace

SparseDirectSolver::SparseDirectSolver(const SparseMatrix& matrix) : impl_(std::make_unique<Impl>()) {
  if (matrix.rows() != matrix.cols()) throw SolverError("sparse solve: matrix is not square");
  impl_->matrix = matrix;
  impl_->matrix.makeCompressed();
  impl_->rows = impl_->matrix;
  if (matrix.rows() == 0) return;
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "sparse solve: factorization of " << matrix.rows() << "x" << matrix.cols()
        << " matrix failed (singular): " << impl_->lu.lastErrorMessage();
    throw SolverError(msg.str());
  }
}

SparseDirectSolver::~SparseDirectSolver() = default;
SparseDirectSolver::SparseDirectSolver(SparseDirectSolver&&) noexcept = default;
SparseDirectSolver& SparseDirectSolver::operator=(SparseDirectSolver&&) noexcept = default;

std::size_t SparseDirectSolver::size() const { return static_cast<std::size_t>(impl_->matrix.rows()); }

double relative_residual(const SparseMatrix& matrix, const Vector& x, const Vector& rhs) {
  const double scale = rhs.norm();
  const double r = (matrix * x - rhs).norm();
  return scale > 0.0 ? r / scale : r;
}

Vector SparseDirectSolver::solve(const Vector& rhs, double residual_tolerance) const {
  if (rhs.size() != impl_->matrix.rows()) throw SolverError("sparse solve: rhs size mismatch");
  if (rhs.size() == 0) return rhs;
  Vector x = impl_->lu.solve(rhs);
  // Refinement stops once the correction no longer halves.
  double last = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 10 && x.allFinite(); ++it) {
    const Vector d = impl_->lu.solve(extended_residual(impl_->rows, x, rhs));
    const double size = d.lpNorm<Eigen::Infinity>();
    if (!(size < 0.5 * last)) break;
    x += d;
    last = size;
    if (size == 0.0) break;
  }
  const double res = relative_residual(impl_->matrix, x, rhs);
  if (!x.allFinite() || res > residual_tolerance) {
    std::ostringstream msg;
    msg << "sparse solve: relative residual " << res << " exceeds " << residual_tolerance
        << " (matrix numerically singular?)";
    throw SolverError(msg.str());
  }
  return x;
}

Vector solve_sparse(const SparseMatrix& matrix, const Vector& rhs, double residual_tolerance) {
  return SparseDirectSolver(matrix).solve(rhs, residual_tolerance);
}

}  // namespace biotcr
