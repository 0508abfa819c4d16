#include "glvortex/coupling.hpp"

#include <cmath>
#include <numbers>

#include "glvortex/bessel.hpp"
#include "glvortex/errors.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;
namespace bs = bessel;

// Antiderivative of log(x² + y²) in x and y.
double log_antiderivative(double x, double y) {
  double v = 0.0;
  if (x != 0.0 && y != 0.0) v += x * y * (std::log(x * x + y * y) - 3.0);
  if (x != 0.0) v += x * x * std::atan(y / x);
  if (y != 0.0) v += y * y * std::atan(x / y);
  return v;
}

// 4-point Gauss-Legendre on [−½, ½]
constexpr double kGx[4] = {-0.4305681557970262, -0.1699905217924281, 0.1699905217924281, 0.4305681557970262};
constexpr double kGw[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269};

}  // namespace

double cell_average_log(const Vec2& c, double h) {
  const double x1 = c.x() - 0.5 * h, x2 = c.x() + 0.5 * h, y1 = c.y() - 0.5 * h, y2 = c.y() + 0.5 * h;
  const double I = log_antiderivative(x2, y2) - log_antiderivative(x1, y2) - log_antiderivative(x2, y1) +
                   log_antiderivative(x1, y1);
  return 0.5 * I / (h * h);
}

double cell_average_K0(const Vec2& c, double h) {
  double smooth = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      smooth += kGw[i] * kGw[j] * bs::K0_plus_log((c + h * Vec2(kGx[i], kGx[j])).norm());
  return smooth - cell_average_log(c, h);
}

bool near_source(const Grid& grid, int node, const VortexConfig& config, int halo) {
  const Vec2 p = grid.point(node);
  for (const Vec2& a : config.points)
    if ((p - a).cwiseAbs().maxCoeff() <= halo * grid.h() + 1e-12) return true;
  return false;
}

ScalarField solve_w1(const Workspace& ws, const VortexConfig& config) {
  validate_config(ws.spec(), config);
  const Grid& g = *ws.grid();
  if (config.N() == 0) return ScalarField(ws.grid());
  ScalarField w = stilde_total(ws.helmholtz(), config);
  for (int k : g.interior_nodes()) {
    const Vec2 p = g.point(k);
    for (const Vec2& a : config.points) {
      const Vec2 d = p - a;
      w[k] += d.cwiseAbs().maxCoeff() <= 3.0 * g.h() ? cell_average_K0(d, g.h()) : bs::K0(d.norm());
    }
  }
  fill_ghosts(w, nullptr);
  const std::vector<double> zero(g.cuts().size(), 0.0);
  fill_ghosts(w, &zero);
  return w;
}

ScalarField solve_B1(const Workspace& ws, const ScalarField& w1) {
  return ws.laplace().solve(w1, std::vector<double>(ws.grid()->cuts().size(), 0.0));
}

std::vector<double> B1_at_sources(const VortexConfig& config, const ScalarField& B1) {
  // B1 + Σ(K0 + log)(|x − a_j|) is C² near the sources; interpolate that and add the singular part back.
  const Grid& g = B1.grid();
  auto singular = [&](const Vec2& x) {
    double s = 0.0;
    for (const Vec2& a : config.points) s += bs::K0_plus_log((x - a).norm());
    return s;
  };
  ScalarField smooth = B1;
  for (int k = 0; k < g.node_count(); ++k)
    if (g.kind(k) != NodeKind::outside) smooth[k] += singular(g.point(k));
  std::vector<double> out;
  for (const Vec2& a : config.points) out.push_back(interpolate(smooth, a) - singular(a));
  return out;
}

double min_phi_value(const Workspace& ws, const VortexConfig& config, double hex, const ScalarField& B1) {
  double v = hex * hex * ws.F_xi0();
  const std::vector<double> b1 = B1_at_sources(config, B1);
  for (int i = 0; i < config.N(); ++i) v += 2.0 * kPi * hex * interpolate(ws.xi0(), config.points[i]) - kPi * b1[i];
  return v;
}

CouplingBundle coupling_bundle(const Workspace& ws, const VortexConfig& config, double hex) {
  CouplingBundle b;
  b.config = config;
  b.hex = hex;
  b.w1 = solve_w1(ws, config);
  b.B1 = solve_B1(ws, b.w1);
  b.beta = b.B1 - hex * ws.xi0();
  b.min_phi_value = min_phi_value(ws, config, hex, b.B1);
  return b;
}

double w1_total_mass(const Workspace& ws, const ScalarField& w1) {
  const DomainSpec& spec = ws.spec();
  const double h = ws.h();
  // outward flux by a one-sided quadratic through the zero boundary value
  const int M = 1024;
  double flux = 0.0;
  for (int i = 0; i < M; ++i) {
    const double t = 2.0 * kPi * (i + 0.5) / M;
    const Vec2 p(spec.a * std::cos(t), spec.b * std::sin(t));
    const Vec2 tangent(-spec.a * std::sin(t), spec.b * std::cos(t));
    const Vec2 n = Vec2(spec.b * std::cos(t), spec.a * std::sin(t)).normalized();
    const double s1 = 2.0 * h, s2 = 4.0 * h;
    const double v1 = interpolate(w1, p - s1 * n), v2 = interpolate(w1, p - s2 * n);
    // u(s) = c1 s + c2 s², s measured inward
    const double c1 = (v1 * s2 * s2 - v2 * s1 * s1) / (s1 * s2 * (s2 - s1));
    flux += -c1 * tangent.norm() * 2.0 * kPi / M;
  }
  return integrate(w1) - flux;
}

double check_B1_identity(const Workspace& ws, const CouplingBundle& bundle) {
  const Grid& g = *ws.grid();
  const VortexConfig& c = bundle.config;
  const ScalarField R = R_total(ws.laplace(), c);
  const ScalarField T = stilde_total(ws.helmholtz(), c);
  double res = 0.0;
  for (int k : g.interior_nodes()) {
    if (near_source(g, k, c)) continue;
    double rhs = R[k] - T[k];
    for (const Vec2& a : c.points) rhs -= bs::K0_plus_log((g.point(k) - a).norm());
    res = std::max(res, std::abs(bundle.B1[k] - rhs));
  }
  return res;
}

double check_B1_identity(const Workspace& ws, const VortexConfig& config) {
  return check_B1_identity(ws, coupling_bundle(ws, config, 0.0));
}

WHResidual check_WH_identity(const Workspace& ws, const VortexConfig& config, double hex) {
  validate_config(ws.spec(), config);
  WHResidual r;
  const CouplingBundle b = coupling_bundle(ws, config, hex);
  r.H = H_energy(ws, config, hex);
  r.W = W_energy(ws, config);
  r.F = ws.F_xi0();
  r.min_phi = b.min_phi_value;
  r.absolute = std::abs(r.H + hex * hex * r.F - r.min_phi - r.W);
  r.scaled = r.absolute / (1.0 + std::abs(r.H));

  const ScalarField T = stilde_total(ws.helmholtz(), config);
  const ScalarField R = R_total(ws.laplace(), config);
  double lhs = 0.0, rhs = 0.0;
  const auto& a = config.points;
  const std::vector<double> b1 = B1_at_sources(config, b.B1);
  for (int i = 0; i < config.N(); ++i) {
    lhs += kPi * (interpolate(T, a[i]) + bs::kL);
    for (int j = 0; j < config.N(); ++j)
      if (j != i) lhs += kPi * (bs::K0((a[i] - a[j]).norm()) + std::log((a[i] - a[j]).norm()));
    rhs += kPi * (interpolate(R, a[i]) - b1[i]);
  }
  r.reduction = std::abs(lhs - rhs);
  return r;
}

double beta_consistency(const Workspace& ws, const CouplingBundle& b) {
  const Grid& g = *ws.grid();
  const ScalarField lap_beta = -1.0 * ws.laplace().apply(b.beta);
  const ScalarField& xi = ws.xi0();
  double worst = 0.0, scale = 0.0;
  for (int k : g.interior_nodes()) {
    if (near_source(g, k, b.config)) continue;
    const double l = b.hex + lap_beta[k], r = b.hex * xi[k] + b.w1[k];
    worst = std::max(worst, std::abs(l * l - r * r));
    scale = std::max(scale, r * r);
  }
  return worst / (1.0 + scale);
}

}  // namespace glvortex
