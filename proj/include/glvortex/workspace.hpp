#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "glvortex/greens.hpp"

namespace glvortex {

// Lazily built objects shared by all computations on one (domain, resolution):
// the grid, both factorized operators, ξ₀ and the interpolated diagonal s.
// Const methods are safe to call from several threads.
class Workspace {
 public:
  Workspace(const DomainSpec& spec, int resolution, int lattice_resolution = 16);

  const DomainSpec& spec() const { return grid_->spec(); }
  const GridPtr& grid() const { return grid_; }
  int resolution() const { return grid_->resolution(); }
  double h() const { return grid_->h(); }

  const OperatorHandle& helmholtz() const;
  const OperatorHandle& laplace() const;
  const ScalarField& xi0() const;
  double F_xi0() const;
  const DiagLattice& lattice() const;
  // v_ε and ξ_ε = ξ₀ + v_ε for a field strength, cached.
  const ScalarField& v_eps(double hex) const;
  const ScalarField& xi_eps(double hex) const;

 private:
  GridPtr grid_;
  int lattice_resolution_;
  mutable std::recursive_mutex mu_;
  mutable std::unique_ptr<OperatorHandle> helm_, lap_;
  mutable std::unique_ptr<ScalarField> xi0_;
  mutable double F_xi0_ = 0.0;
  mutable std::unique_ptr<DiagLattice> lattice_;
  mutable std::map<double, ScalarField> v_eps_, xi_eps_;
};

// Diagonal lattice cache in $GLVORTEX_CACHE_DIR (no-op when unset).
std::unique_ptr<DiagLattice> load_cached_lattice(const Grid& grid, int lattice_resolution);
void store_cached_lattice(const Grid& grid, const DiagLattice& lattice);

}  // namespace glvortex
