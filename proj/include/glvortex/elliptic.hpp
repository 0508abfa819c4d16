#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <mutex>

#include "glvortex/field.hpp"

namespace glvortex {

enum class OperatorKind { helmholtz, laplace };
enum class SolverKind { direct, cg };

// Discrete (-Δ+1) or (-Δ) with Dirichlet data on the cut-cell boundary.
// Symmetric: a cut at fraction θ adds 1/(θh²) to the diagonal only.
class OperatorHandle {
 public:
  OperatorHandle(GridPtr grid, OperatorKind kind, SolverKind solver = SolverKind::direct);
  ~OperatorHandle();

  OperatorKind kind() const { return kind_; }
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Eigen::SparseMatrix<double>& matrix() const { return A_; }

  // Right-hand side contribution of boundary values (one per cut).
  Eigen::VectorXd boundary_rhs(const std::vector<double>& bvals) const;
  // Solves A x = b on the unknowns.
  Eigen::VectorXd solve_unknowns(const Eigen::VectorXd& b) const;

  ScalarField solve(const ScalarField& rhs, const PointFn& boundary) const;
  ScalarField solve(const ScalarField& rhs, const std::vector<double>& bvals) const;
  // Discrete (-Δ+c)u at interior nodes for the given boundary values.
  ScalarField apply(const ScalarField& u, const std::vector<double>& bvals) const;
  ScalarField apply(const ScalarField& u) const;

  SolverKind solver() const { return solver_; }

 private:
  void factorize() const;

  GridPtr grid_;
  OperatorKind kind_;
  mutable SolverKind solver_;
  Eigen::SparseMatrix<double> A_;
  std::vector<double> cut_coef_;
  struct Factor;
  mutable std::unique_ptr<Factor> factor_;
  mutable std::once_flag once_;
};

using OperatorPtr = std::shared_ptr<const OperatorHandle>;

Eigen::VectorXd to_unknowns(const ScalarField& f);
ScalarField from_unknowns(const GridPtr& grid, const Eigen::VectorXd& x);

// (-Δ+1)ξ₀ = -1, ξ₀ = 0 on the boundary.
ScalarField xi0(const OperatorHandle& helmholtz);
ScalarField xi0(const GridPtr& grid);
// ½∫|∇ξ|² + (ξ+1)²
double F_energy(const ScalarField& field);

}  // namespace glvortex
