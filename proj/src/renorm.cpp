#include "glvortex/renorm.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "glvortex/bessel.hpp"
#include "glvortex/errors.hpp"

namespace glvortex {

namespace bs = bessel;
constexpr double kPi = std::numbers::pi;

void validate_config(const DomainSpec& spec, const VortexConfig& config) {
  for (const Vec2& p : config.points) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) throw ConfigError("vortex coordinates must be finite");
    if (!(signed_distance(spec, p) > 0.0)) throw DomainError("vortex point outside the domain");
  }
  for (int i = 0; i < config.N(); ++i)
    for (int j = i + 1; j < config.N(); ++j)
      if (config.points[i] == config.points[j]) throw ConfigError("vortex points must be distinct");
}

double min_separation(const VortexConfig& config) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < config.N(); ++i)
    for (int j = i + 1; j < config.N(); ++j) m = std::min(m, (config.points[i] - config.points[j]).norm());
  return m;
}

double min_boundary_distance(const DomainSpec& spec, const VortexConfig& config) {
  double m = std::numeric_limits<double>::infinity();
  for (const Vec2& p : config.points) m = std::min(m, signed_distance(spec, p));
  return m;
}

double rho(const DomainSpec& spec, const VortexConfig& config) {
  return 0.25 * std::min(min_separation(config), min_boundary_distance(spec, config));
}

bool in_M(const DomainSpec& spec, const VortexConfig& config, double hex) {
  const double thr = std::pow(hex, -1.0 / 3.0);
  for (const Vec2& p : config.points)
    if (signed_distance(spec, p) < thr) return false;
  return true;
}

double ParamRegime::sigma_eps() const {
  if (eps <= 0.0) return 0.0;
  return std::pow(eps, 0.99) * std::max(std::pow(static_cast<double>(N), 5) * std::sqrt(hex), hex * hex);
}

double ParamRegime::N_bound(const DomainSpec& spec, double hex) {
  return hex * (spec.area() - std::pow(hex, -0.25)) / (2.0 * kPi);
}

int ParamRegime::N_max(const DomainSpec& spec, double hex) {
  return std::max(0, static_cast<int>(std::floor(N_bound(spec, hex))));
}

bool ParamRegime::N_in_window(const DomainSpec& spec) const { return N >= 1 && N <= N_bound(spec, hex); }

bool ParamRegime::hex_in_window(double K1, double k1) const {
  if (hex < K1) return false;
  return eps <= 0.0 || hex <= k1 * std::pow(eps, -0.25);
}

namespace {

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

double chi_eps(double d, double hex) {
  const double c = std::cbrt(hex);
  return smooth5(2.0 * d * c - 1.0);
}

double chi_eps_deriv(double d, double hex) {
  const double c = std::cbrt(hex);
  return 2.0 * c * smooth5_d(2.0 * d * c - 1.0);
}

ScalarField v_eps(const DiagLattice& lattice, const GridPtr& grid, double hex) {
  if (!(hex >= 1.0)) throw ConfigError("hex must be at least 1");
  ScalarField v(grid);
  for (int k : grid->interior_nodes()) {
    const double chi = chi_eps(grid->distance(k), hex);
    if (chi > 0.0) v[k] = chi * lattice.s(grid->point(k)) / (2.0 * hex);
  }
  return v;
}

double v_eps_residual(const Workspace& ws, double hex) {
  return ws.helmholtz().apply(ws.v_eps(hex)).max_abs_interior();
}

ScalarField R_total(const OperatorHandle& laplace, const VortexConfig& config) {
  return laplace.solve(ScalarField(laplace.grid_ptr()), [&](const Vec2& x) {
    double s = 0.0;
    for (const Vec2& a : config.points) s += std::log((x - a).norm());
    return s;
  });
}

ScalarField stilde_total(const OperatorHandle& helmholtz, const VortexConfig& config) {
  return helmholtz.solve(ScalarField(helmholtz.grid_ptr()), [&](const Vec2& x) {
    double s = 0.0;
    for (const Vec2& a : config.points) s -= bs::K0((x - a).norm());
    return s;
  });
}

EnergyEval evaluate_H(const Workspace& ws, const VortexConfig& config, double hex, bool modified, bool gradient) {
  const DomainSpec& spec = ws.spec();
  validate_config(spec, config);
  EnergyEval out;
  const int n = config.N();
  if (gradient) out.grad.assign(n, Vec2::Zero());
  if (n == 0) return out;
  const auto& a = config.points;

  const ScalarField& xi = ws.xi0();
  const ScalarField T = stilde_total(ws.helmholtz(), config);
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    e += 2.0 * kPi * hex * interpolate(xi, a[i]) + kPi * bs::kL + kPi * interpolate(T, a[i]);
    if (gradient) out.grad[i] += 2.0 * kPi * hex * interpolate_gradient(xi, a[i]) + 2.0 * kPi * interpolate_gradient(T, a[i]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec2 diff = a[i] - a[j];
      const double r = diff.norm();
      e += kPi * bs::K0(r);
      if (gradient) out.grad[i] -= 2.0 * kPi * bs::K1(r) * diff / r;
    }
  }
  if (modified) {
    // Replace π s(a_i) by π χ s(a_i); the diagonal comes from the same
    // discrete solve that enters T, so it cancels exactly where χ = 0.
    for (int i = 0; i < n; ++i) {
      const DistanceInfo di = distance_info(spec, a[i]);
      const double chi = chi_eps(di.d, hex);
      if (chi >= 1.0) continue;
      const ScalarField st = stilde_field(ws.helmholtz(), a[i]);
      const double s = interpolate(st, a[i]) + bs::kL;
      e -= kPi * (1.0 - chi) * s;
      if (gradient) {
        const Vec2 grad_s = 2.0 * interpolate_gradient(st, a[i]);
        out.grad[i] -= kPi * ((1.0 - chi) * grad_s - s * chi_eps_deriv(di.d, hex) * di.gradient);
      }
    }
  }
  out.value = e;
  return out;
}

namespace {

bool has_coincident(const VortexConfig& c) {
  for (int i = 0; i < c.N(); ++i)
    for (int j = i + 1; j < c.N(); ++j)
      if (c.points[i] == c.points[j]) return true;
  return false;
}

}  // namespace

double H_energy(const Workspace& ws, const VortexConfig& config, double hex) {
  if (has_coincident(config)) return std::numeric_limits<double>::infinity();
  return evaluate_H(ws, config, hex, false, false).value;
}

double H_mod(const Workspace& ws, const VortexConfig& config, double hex) {
  if (has_coincident(config)) return std::numeric_limits<double>::infinity();
  return evaluate_H(ws, config, hex, true, false).value;
}

std::vector<Vec2> grad_H(const Workspace& ws, const VortexConfig& config, double hex) {
  const double margin = 2.0 * ws.h();
  for (const Vec2& p : config.points)
    if (signed_distance(ws.spec(), p) < margin) throw DomainError("point too close to the boundary for the stencil");
  return evaluate_H(ws, config, hex, false, true).grad;
}

std::vector<Vec2> grad_H_mod(const Workspace& ws, const VortexConfig& config, double hex) {
  return evaluate_H(ws, config, hex, true, true).grad;
}

double W_energy(const Workspace& ws, const VortexConfig& config) {
  validate_config(ws.spec(), config);
  if (has_coincident(config)) return std::numeric_limits<double>::infinity();
  const int n = config.N();
  if (n == 0) return 0.0;
  const ScalarField R = R_total(ws.laplace(), config);
  double w = 0.0;
  for (int i = 0; i < n; ++i) {
    w += kPi * interpolate(R, config.points[i]);
    for (int j = 0; j < n; ++j)
      if (j != i) w -= kPi * std::log((config.points[i] - config.points[j]).norm());
  }
  return w;
}

}  // namespace glvortex
