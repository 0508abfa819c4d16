#include "glvortex/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <cmath>

#include "glvortex/errors.hpp"

namespace glvortex {

struct OperatorHandle::Factor {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
};

OperatorHandle::OperatorHandle(GridPtr grid, OperatorKind kind, SolverKind solver)
    : grid_(std::move(grid)), kind_(kind), solver_(solver) {
  const Grid& g = *grid_;
  const int n = g.interior_count();
  const double h2 = g.h() * g.h();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * static_cast<std::size_t>(n));
  std::vector<double> diag(n, kind_ == OperatorKind::helmholtz ? 1.0 : 0.0);
  cut_coef_.resize(g.cuts().size());
  for (int k : g.interior_nodes()) {
    const int row = g.unknown(k);
    const int i = g.ix(k), j = g.iy(k);
    for (int dir = 0; dir < 4; ++dir) {
      const int q = g.index(i + kDirX[dir], j + kDirY[dir]);
      if (g.interior(q)) {
        diag[row] += 1.0 / h2;
        trip.emplace_back(row, g.unknown(q), -1.0 / h2);
      }
    }
  }
  for (std::size_t c = 0; c < g.cuts().size(); ++c) {
    const Cut& cut = g.cuts()[c];
    cut_coef_[c] = 1.0 / (cut.theta * h2);
    diag[g.unknown(cut.node)] += cut_coef_[c];
  }
  for (int r = 0; r < n; ++r) trip.emplace_back(r, r, diag[r]);
  A_.resize(n, n);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
}

OperatorHandle::~OperatorHandle() = default;

void OperatorHandle::factorize() const {
  std::call_once(once_, [this] {
    factor_ = std::make_unique<Factor>();
    if (solver_ == SolverKind::direct) {
      factor_->ldlt.compute(A_);
      if (factor_->ldlt.info() == Eigen::Success) return;
      solver_ = SolverKind::cg;
    }
    factor_->cg.setTolerance(1e-13);
    factor_->cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * A_.rows()));
    factor_->cg.compute(A_);
  });
}

Eigen::VectorXd OperatorHandle::boundary_rhs(const std::vector<double>& bvals) const {
  const Grid& g = *grid_;
  if (bvals.size() != g.cuts().size()) throw ConfigError("boundary data does not match the grid cuts");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(g.interior_count());
  for (std::size_t c = 0; c < bvals.size(); ++c) b[g.unknown(g.cuts()[c].node)] += cut_coef_[c] * bvals[c];
  return b;
}

Eigen::VectorXd OperatorHandle::solve_unknowns(const Eigen::VectorXd& b) const {
  factorize();
  const double bn = b.norm();
  if (bn == 0.0) return Eigen::VectorXd::Zero(b.size());
  Eigen::VectorXd x;
  if (solver_ == SolverKind::direct) {
    x = factor_->ldlt.solve(b);
    Eigen::VectorXd r = b - A_ * x;
    if (r.norm() > 1e-10 * bn) {
      x += factor_->ldlt.solve(r);
      r = b - A_ * x;
    }
    if (!(r.norm() <= 1e-10 * bn)) throw NumericError("direct solve lost accuracy", r.norm() / bn);
  } else {
    x = factor_->cg.solve(b);
    const double rel = (b - A_ * x).norm() / bn;
    if (!(rel <= 1e-10)) throw NumericError("conjugate gradient did not converge", rel);
  }
  return x;
}

Eigen::VectorXd to_unknowns(const ScalarField& f) {
  const Grid& g = f.grid();
  Eigen::VectorXd x(g.interior_count());
  for (int k : g.interior_nodes()) x[g.unknown(k)] = f[k];
  return x;
}

ScalarField from_unknowns(const GridPtr& grid, const Eigen::VectorXd& x) {
  ScalarField f(grid);
  for (int k : grid->interior_nodes()) f[k] = x[grid->unknown(k)];
  return f;
}

ScalarField OperatorHandle::solve(const ScalarField& rhs, const std::vector<double>& bvals) const {
  if (rhs.grid_ptr() != grid_) throw ConfigError("right-hand side lives on another grid");
  Eigen::VectorXd b = to_unknowns(rhs) + boundary_rhs(bvals);
  ScalarField u = from_unknowns(grid_, solve_unknowns(b));
  fill_ghosts(u, &bvals);
  return u;
}

ScalarField OperatorHandle::solve(const ScalarField& rhs, const PointFn& boundary) const {
  return solve(rhs, boundary_values(*grid_, boundary));
}

ScalarField OperatorHandle::apply(const ScalarField& u, const std::vector<double>& bvals) const {
  if (u.grid_ptr() != grid_) throw ConfigError("field lives on another grid");
  Eigen::VectorXd y = A_ * to_unknowns(u) - boundary_rhs(bvals);
  return from_unknowns(grid_, y);
}

ScalarField OperatorHandle::apply(const ScalarField& u) const {
  return apply(u, std::vector<double>(grid_->cuts().size(), 0.0));
}

ScalarField xi0(const OperatorHandle& helmholtz) {
  if (helmholtz.kind() != OperatorKind::helmholtz) throw ConfigError("xi0 needs the Helmholtz operator");
  return helmholtz.solve(ScalarField(helmholtz.grid_ptr(), -1.0), [](const Vec2&) { return 0.0; });
}

ScalarField xi0(const GridPtr& grid) { return xi0(OperatorHandle(grid, OperatorKind::helmholtz)); }

double F_energy(const ScalarField& field) {
  const Grid& g = field.grid();
  const VectorField grad = gradient_field(field);
  double s = 0.0;
  for (int k : g.interior_nodes()) {
    const double gx = grad.x[k], gy = grad.y[k], v = field[k] + 1.0;
    s += g.weight(k) * (gx * gx + gy * gy + v * v);
  }
  return 0.5 * s;
}

}  // namespace glvortex
