#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "biotcr/assembly.hpp"

namespace biotcr {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU factorization (COLAMD ordering) of a square matrix, reused
/// across right-hand sides.
class SparseDirectSolver {
 public:
  /// Throws SolverError on structural or numerical singularity.
  explicit SparseDirectSolver(const SparseMatrix& matrix);
  ~SparseDirectSolver();
  SparseDirectSolver(SparseDirectSolver&&) noexcept;
  SparseDirectSolver& operator=(SparseDirectSolver&&) noexcept;

  /// Solves with iterative refinement on extended-precision residuals;
  /// throws SolverError if the relative residual stays above
  /// residual_tolerance.
  Vector solve(const Vector& rhs, double residual_tolerance = 1e-9) const;

  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot factor-and-solve.
Vector solve_sparse(const SparseMatrix& matrix, const Vector& rhs, double residual_tolerance = 1e-10);

double relative_residual(const SparseMatrix& matrix, const Vector& x, const Vector& rhs);

}  // namespace biotcr
