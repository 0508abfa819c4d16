#include "glvortex/greens.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "glvortex/bessel.hpp"
#include "glvortex/errors.hpp"

namespace glvortex {

namespace bs = bessel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_source(const Grid& g, const Vec2& y, bool* warning) {
  const double d = signed_distance(g.spec(), y);
  if (!(d > 0.0)) throw DomainError("source point must lie strictly inside the domain");
  if (warning) *warning = d < g.h();
}

double k0_safe(double r) { return bs::K0(std::max(r, 1e-300)); }

double smooth5(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smooth5_d(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

}  // namespace

ScalarField stilde_field(const OperatorHandle& helmholtz, const Vec2& y, bool* warning) {
  check_source(helmholtz.grid(), y, warning);
  return helmholtz.solve(ScalarField(helmholtz.grid_ptr()), [&](const Vec2& x) { return -bs::K0((x - y).norm()); });
}

GreenBundle green_G(const OperatorHandle& helmholtz, const Vec2& y, const OperatorHandle* laplace) {
  GreenBundle b;
  b.source = y;
  b.stilde = stilde_field(helmholtz, y, &b.accuracy_warning);
  const GridPtr& g = helmholtz.grid_ptr();
  b.G = ScalarField(g);
  b.S = ScalarField(g);
  for (const auto* list : {&g->interior_nodes(), &g->ghost_nodes()})
    for (int k : *list) {
      const double r = (g->point(k) - y).norm();
      b.G[k] = (b.stilde[k] + k0_safe(r)) / kTwoPi;
      b.S[k] = b.stilde[k] + bs::K0_plus_log(r);
    }
  if (laplace) b.R = laplace_R_field(*laplace, y);
  return b;
}

double green_value(const GreenBundle& bundle, const Vec2& x) {
  return (interpolate(bundle.stilde, x) + k0_safe((x - bundle.source).norm())) / kTwoPi;
}

ScalarField laplace_R_field(const OperatorHandle& laplace, const Vec2& y, bool* warning) {
  if (laplace.kind() != OperatorKind::laplace) throw ConfigError("R needs the Laplace operator");
  check_source(laplace.grid(), y, warning);
  return laplace.solve(ScalarField(laplace.grid_ptr()), [&](const Vec2& x) { return std::log((x - y).norm()); });
}

double s_point(const OperatorHandle& helmholtz, const Vec2& p, bool* warning) {
  return interpolate(stilde_field(helmholtz, p, warning), p) + bs::kL;
}

double s_singular(const DomainSpec& spec, double d) {
  const double d0 = spec.d0();
  const double beta = 1.0 - smooth5(d / d0 - 1.0);
  if (beta == 0.0) return 0.0;
  return -bs::K0(2.0 * d) * beta;
}

double s_singular_deriv(const DomainSpec& spec, double d) {
  const double d0 = spec.d0();
  const double t = d / d0 - 1.0;
  const double beta = 1.0 - smooth5(t), dbeta = -smooth5_d(t) / d0;
  if (beta == 0.0 && dbeta == 0.0) return 0.0;
  return 2.0 * bs::K1(2.0 * d) * beta - bs::K0(2.0 * d) * dbeta;
}

DiagLattice::DiagLattice(const OperatorHandle& helmholtz, int lattice_resolution)
    : spec_(helmholtz.grid().spec()), lattice_(build_grid(spec_, lattice_resolution)) {
  if (helmholtz.kind() != OperatorKind::helmholtz) throw ConfigError("the diagonal needs the Helmholtz operator");
  min_distance_ = 3.0 * helmholtz.grid().h();
  sampled_.assign(lattice_->node_count(), std::numeric_limits<double>::quiet_NaN());
  for (int k : lattice_->interior_nodes()) {
    const double d = lattice_->distance(k);
    if (d < min_distance_) continue;
    const Vec2 p = lattice_->point(k);
    sampled_[k] = s_point(helmholtz, p) - bs::kL - s_singular(spec_, d);
  }
  finish();
}

DiagLattice::DiagLattice(const DomainSpec& spec, int lattice_resolution, const std::vector<double>& sampled_remainder,
                         double min_distance)
    : spec_(spec), lattice_(build_grid(spec, lattice_resolution)), sampled_(sampled_remainder),
      min_distance_(min_distance) {
  if (static_cast<int>(sampled_.size()) != lattice_->node_count()) throw ConfigError("lattice data has wrong size");
  finish();
}

void DiagLattice::finish() {
  remainder_ = ScalarField(lattice_);
  std::vector<unsigned char> known(lattice_->node_count(), 0);
  samples_ = 0;
  for (int k : lattice_->interior_nodes())
    if (std::isfinite(sampled_[k])) {
      remainder_[k] = sampled_[k];
      known[k] = 1;
      ++samples_;
    }
  if (samples_ == 0) throw ConfigError("diagonal lattice has no sample point");
  extrapolate(remainder_, known);
}

double DiagLattice::s(const Vec2& p) const {
  const double d = signed_distance(spec_, p);
  if (!(d > 0.0)) throw DomainError("s is defined inside the domain only");
  return bs::kL + s_singular(spec_, d) + interpolate(remainder_, p);
}

Vec2 DiagLattice::grad_s(const Vec2& p) const {
  const DistanceInfo di = distance_info(spec_, p);
  if (!(di.d > 0.0)) throw DomainError("s is defined inside the domain only");
  return interpolate_gradient(remainder_, p) + s_singular_deriv(spec_, di.d) * di.gradient;
}

ScalarField s_diag(const DiagLattice& lattice, const GridPtr& grid) {
  ScalarField out(grid);
  std::vector<unsigned char> known(grid->node_count(), 0);
  for (int k : grid->interior_nodes()) {
    out[k] = lattice.s(grid->point(k));
    known[k] = 1;
  }
  extrapolate(out, known);
  return out;
}

SEstimate s_estimates(const DiagLattice& lattice, const Grid& grid, double dmin) {
  SEstimate e{0.0, 0.0};
  for (int k : grid.interior_nodes()) {
    const double d = grid.distance(k);
    if (d < dmin) continue;
    const Vec2 p = grid.point(k);
    e.c_value = std::max(e.c_value, std::abs(lattice.s(p)) / (std::abs(std::log(d)) + 1.0));
    e.c_gradient = std::max(e.c_gradient, lattice.grad_s(p).norm() * d);
  }
  return e;
}

}  // namespace glvortex
