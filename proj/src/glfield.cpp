#include "glvortex/glfield.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "glvortex/errors.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double t) {
  while (t > kPi) t -= 2.0 * kPi;
  while (t <= -kPi) t += 2.0 * kPi;
  return t;
}

// Five-point Laplacian from interior and ghost values.
ScalarField laplacian5(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(f.grid_ptr());
  const double ih2 = 1.0 / (g.h() * g.h());
  for (int k : g.interior_nodes()) {
    const int i = g.ix(k), j = g.iy(k);
    out[k] = (f[g.index(i + 1, j)] + f[g.index(i - 1, j)] + f[g.index(i, j + 1)] + f[g.index(i, j - 1)] - 4.0 * f[k]) *
             ih2;
  }
  return out;
}

// Harmonic conjugate of Σ_j R(·,a_j) on a coarse grid, by path integration
// along the centre row and then along columns.
class ConjugateR {
 public:
  ConjugateR(const DomainSpec& spec, const VortexConfig& config, int resolution) {
    Workspace ws(spec, resolution);
    const ScalarField R = R_total(ws.laplace(), config);
    grid_ = ws.grid();
    const Grid& g = *grid_;
    const VectorField dR = gradient_field(R);
    psi_ = ScalarField(grid_);
    known_.assign(g.node_count(), 0);
    const double h = g.h();
    auto idx = [&](const Vec2& p) { return Eigen::Vector2i(std::lround((p.x() - g.x0()) / h), std::lround((p.y() - g.y0()) / h)); };
    const Eigen::Vector2i c = idx(Vec2::Zero());
    auto ok = [&](int i, int j) { return g.in_box(i, j) && g.valued(g.index(i, j)); };
    // ψ_x = −R_y, ψ_y = R_x
    known_[g.index(c.x(), c.y())] = 1;
    for (int dir : {1, -1})
      for (int i = c.x(); ok(i + dir, c.y()); i += dir) {
        const int k = g.index(i, c.y()), q = g.index(i + dir, c.y());
        psi_[q] = psi_[k] - dir * 0.5 * h * (dR.y[k] + dR.y[q]);
        known_[q] = 1;
      }
    for (int i = 0; i < g.nx(); ++i) {
      if (!known_[g.index(i, c.y())]) continue;
      for (int dir : {1, -1})
        for (int j = c.y(); ok(i, j + dir); j += dir) {
          const int k = g.index(i, j), q = g.index(i, j + dir);
          psi_[q] = psi_[k] + dir * 0.5 * h * (dR.x[k] + dR.x[q]);
          known_[q] = 1;
        }
    }
  }

  // Bilinear over known coarse nodes.
  double operator()(const Vec2& p) const {
    const Grid& g = *grid_;
    const double fx = (p.x() - g.x0()) / g.h(), fy = (p.y() - g.y0()) / g.h();
    const int i = static_cast<int>(std::floor(fx)), j = static_cast<int>(std::floor(fy));
    const double tx = fx - i, ty = fy - j;
    double s = 0.0, w = 0.0;
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) {
        if (!g.in_box(i + di, j + dj)) continue;
        const int k = g.index(i + di, j + dj);
        if (!known_[k]) continue;
        const double c = (di ? tx : 1.0 - tx) * (dj ? ty : 1.0 - ty);
        s += c * psi_[k];
        w += c;
      }
    if (w <= 0.0) throw DomainError("point outside the conjugate-function band");
    return s / w;
  }

 private:
  GridPtr grid_;
  ScalarField psi_;
  std::vector<unsigned char> known_;
};

}  // namespace

ComplexField sample_complex(const GridPtr& grid, const ComplexFn& f) {
  ComplexField u(grid);
  for (const auto* list : {&grid->interior_nodes(), &grid->ghost_nodes()})
    for (int k : *list) {
      const std::complex<double> z = f(grid->point(k));
      u.re[k] = z.real();
      u.im[k] = z.imag();
    }
  return u;
}

VectorField PotentialField::A() const {
  const VectorField g = gradient_field(B);
  return {g.y, -1.0 * g.x};
}

PotentialField potential_from(ScalarField B) {
  const std::vector<double> zero(B.grid().cuts().size(), 0.0);
  fill_ghosts(B, &zero);
  return {std::move(B)};
}

std::function<double(const Vec2&)> ansatz_phase(const DomainSpec& spec, const VortexConfig& config, PhaseKind phase) {
  const std::vector<Vec2> pts = config.points;
  if (phase == PhaseKind::product || config.N() == 0)
    return [pts](const Vec2& p) {
      double t = 0.0;
      for (const Vec2& a : pts) t += std::atan2(p.y() - a.y(), p.x() - a.x());
      return t;
    };
  if (spec.kind == DomainKind::disk) {
    // R(x,a) = log|x − a*| + log(|a|/r) with a* = r²a/|a|²
    std::vector<Vec2> images;
    for (const Vec2& a : pts)
      if (a.norm() > 1e-12) images.push_back(spec.a * spec.a * a / a.squaredNorm());
    return [pts, images](const Vec2& p) {
      double t = 0.0;
      for (const Vec2& a : pts) t += std::atan2(p.y() - a.y(), p.x() - a.x());
      for (const Vec2& s : images) t -= std::atan2(p.y() - s.y(), p.x() - s.x());
      return t;
    };
  }
  auto conj = std::make_shared<ConjugateR>(spec, config, 128);
  return [pts, conj](const Vec2& p) {
    double t = 0.0;
    for (const Vec2& a : pts) t += std::atan2(p.y() - a.y(), p.x() - a.x());
    return t - (*conj)(p);
  };
}

ComplexField ansatz_u(const GridPtr& grid, const VortexConfig& config, double eps, PhaseKind phase) {
  const DomainSpec& spec = grid->spec();
  validate_config(spec, config);
  if (!(eps >= 4.0 * grid->h() - 1e-12)) throw PreconditionError("eps must be at least 4 grid cells");
  if (config.N() > 0 && rho(spec, config) < 8.0 * eps - 1e-12)
    throw PreconditionError("vortex cores overlap: need rho_a >= 8 eps");
  const auto theta = ansatz_phase(spec, config, phase);
  const std::vector<Vec2> pts = config.points;
  return sample_complex(grid, [&](const Vec2& p) {
    double r = 1.0;
    for (const Vec2& a : pts) r *= std::min((p - a).norm() / eps, 1.0);
    return std::polar(r, theta(p));
  });
}

double E_energy(const ComplexField& u, double eps) {
  const Grid& g = u.grid();
  const VectorField gr = gradient_field(u.re);
  double e = 0.0;
  for (int k : g.interior_nodes()) {
    const double m2 = u.re[k] * u.re[k] + u.im[k] * u.im[k] - 1.0;
    e += g.weight(k) * (0.5 * (gr.x[k] * gr.x[k] + gr.y[k] * gr.y[k]) + m2 * m2 / (4.0 * eps * eps));
  }
  const VectorField gi = gradient_field(u.im);
  for (int k : g.interior_nodes()) e += g.weight(k) * 0.5 * (gi.x[k] * gi.x[k] + gi.y[k] * gi.y[k]);
  return e;
}

ScalarField jacobian(const ComplexField& u) {
  const VectorField gr = gradient_field(u.re), gi = gradient_field(u.im);
  ScalarField J(u.grid_ptr());
  const Grid& g = u.grid();
  for (const auto* list : {&g.interior_nodes(), &g.ghost_nodes()})
    for (int k : *list) J[k] = gr.x[k] * gi.y[k] - gr.y[k] * gi.x[k];
  return J;
}

double Phi_energy(const PotentialField& B, double hex) {
  const Grid& g = B.B.grid();
  const VectorField gb = gradient_field(B.B);
  const ScalarField lap = laplacian5(B.B);
  double e = 0.0;
  for (int k : g.interior_nodes()) {
    const double c = lap[k] + hex;
    e += g.weight(k) * 0.5 * (gb.x[k] * gb.x[k] + gb.y[k] * gb.y[k] + c * c);
  }
  return e;
}

double GL_energy(const ComplexField& u, const PotentialField& B, double hex, double eps) {
  u.re.require_same_grid(B.B);
  const Grid& g = u.grid();
  const VectorField gr = gradient_field(u.re), gi = gradient_field(u.im);
  const VectorField A = B.A();
  const ScalarField lap = laplacian5(B.B);
  double e = 0.0;
  for (int k : g.interior_nodes()) {
    const double u1 = u.re[k], u2 = u.im[k];
    const double ax = gr.x[k] + A.x[k] * u2, bx = gi.x[k] - A.x[k] * u1;
    const double ay = gr.y[k] + A.y[k] * u2, by = gi.y[k] - A.y[k] * u1;
    const double curl = -lap[k];  // ∂₁A₂ − ∂₂A₁ = −ΔB
    const double m2 = u1 * u1 + u2 * u2 - 1.0;
    e += g.weight(k) * (0.5 * (ax * ax + bx * bx + ay * ay + by * by) + 0.5 * (curl - hex) * (curl - hex) +
                        m2 * m2 / (4.0 * eps * eps));
  }
  return e;
}

SplitResidual check_split_identity(const ComplexField& u, const PotentialField& B, double hex, double eps) {
  const Grid& g = u.grid();
  SplitResidual r;
  r.GL = GL_energy(u, B, hex, eps);
  r.E = E_energy(u, eps);
  r.Phi = Phi_energy(B, hex);
  const ScalarField J = jacobian(u);
  const VectorField A = B.A();
  for (int k : g.interior_nodes()) {
    r.BJ += g.weight(k) * B.B[k] * J[k];
    const double m2 = u.re[k] * u.re[k] + u.im[k] * u.im[k] - 1.0;
    r.R += g.weight(k) * 0.5 * m2 * (A.x[k] * A.x[k] + A.y[k] * A.y[k]);
  }
  r.absolute = std::abs(r.GL - (r.E - 2.0 * r.BJ + r.Phi + r.R));
  r.scaled = r.absolute / (1.0 + std::abs(r.GL));
  return r;
}

SmoothPair random_smooth_pair(const DomainSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Mode {
    std::complex<double> c;
    Vec2 p;
  };
  std::vector<Mode> um;
  for (int i = 0; i < 3; ++i) um.push_back({{0.3 * U(rng), 0.3 * U(rng)}, {2.0 * U(rng), 2.0 * U(rng)}});
  struct Wave {
    double c, phase;
    Vec2 q;
  };
  std::vector<Wave> bm;
  for (int i = 0; i < 3; ++i) bm.push_back({U(rng), kPi * U(rng), {2.0 * U(rng), 2.0 * U(rng)}});
  const double b0 = 1.0 + 0.5 * U(rng);
  SmoothPair s;
  s.u = [um](const Vec2& x) {
    std::complex<double> z(1.0, 0.0);
    for (const Mode& m : um) z += m.c * std::polar(1.0, m.p.dot(x));
    return z;
  };
  s.B = [bm, b0, spec](const Vec2& x) {
    double v = b0;
    for (const Wave& w : bm) v += w.c * std::cos(w.q.dot(x) + w.phase);
    return (1.0 - spec.level(x)) * v;
  };
  return s;
}

double winding_number(const ComplexField& u, const Vec2& center, double radius, int samples) {
  double total = 0.0, prev = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = 2.0 * kPi * i / samples;
    const Vec2 p = center + radius * Vec2(std::cos(t), std::sin(t));
    const double a = std::atan2(interpolate(u.im, p), interpolate(u.re, p));
    if (i > 0) total += wrap(a - prev);
    prev = a;
  }
  return total / (2.0 * kPi);
}

double kappa_GL(int N, double hex, double eps, double F_xi0, double gamma_hat) {
  return hex * hex * F_xi0 + N * (kPi * std::log(1.0 / eps) + gamma_hat);
}

GammaEstimate estimate_gamma(const DomainSpec& spec, const std::vector<VortexConfig>& configs,
                             const std::vector<double>& eps_list, const GammaOptions& opt) {
  if (configs.empty() || eps_list.empty()) throw ConfigError("gamma estimate needs configurations and eps values");
  double eps_max = 0.0;
  for (double e : eps_list) {
    if (!(e > 0.0)) throw ConfigError("eps must be positive");
    eps_max = std::max(eps_max, e);
  }
  for (const auto& c : configs) {
    validate_config(spec, c);
    if (c.N() == 0) throw ConfigError("gamma estimate needs at least one vortex per configuration");
    if (rho(spec, c) < 8.0 * eps_max - 1e-12) throw PreconditionError("configuration has rho_a < 8 eps");
  }

  GammaEstimate est;
  std::vector<double> W(configs.size());
  {
    Workspace ws(spec, opt.w_resolution);
    for (std::size_t c = 0; c < configs.size(); ++c) W[c] = W_energy(ws, configs[c]);
  }
  for (double eps : eps_list) {
    const int res = static_cast<int>(std::ceil(opt.cells_per_eps / eps - 1e-9));
    const GridPtr grid = build_grid(spec, res);
    if (eps < 4.0 * grid->h() - 1e-12) throw PreconditionError("grid does not resolve eps");
    std::vector<GammaSample> row(configs.size());
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto work = [&] {
      for (int c = next++; c < static_cast<int>(configs.size()); c = next++) {
        try {
          const ComplexField u = ansatz_u(grid, configs[c], eps, opt.phase);
          GammaSample s;
          s.config = c;
          s.N = configs[c].N();
          s.eps = eps;
          s.resolution = res;
          s.E = E_energy(u, eps);
          s.W = W[c];
          s.gamma = (s.E - s.N * kPi * std::log(1.0 / eps) - s.W) / s.N;
          row[c] = s;
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const int jobs = std::max(1, std::min<int>(opt.jobs, configs.size()));
    if (jobs == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, mean = 0.0;
    for (const auto& s : row) {
      lo = std::min(lo, s.gamma);
      hi = std::max(hi, s.gamma);
      mean += s.gamma / row.size();
      est.table.push_back(s);
    }
    est.spread = std::max(est.spread, hi - lo);
    est.eps_means.push_back(mean);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double m : est.eps_means) {
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    est.gamma_hat += m / est.eps_means.size();
  }
  est.drift = hi - lo;
  est.samples = static_cast<int>(est.table.size());
  return est;
}

VorticityMasses vorticity_concentration(const ComplexField& u, const VortexConfig& config, double radius) {
  const Grid& g = u.grid();
  const ScalarField J = jacobian(u);
  VorticityMasses out;
  out.masses.assign(config.N(), 0.0);
  for (int k : g.interior_nodes()) {
    const Vec2 p = g.point(k);
    bool inside = false;
    for (int i = 0; i < config.N(); ++i)
      if ((p - config.points[i]).norm() < radius) {
        out.masses[i] += g.weight(k) * J[k];
        inside = true;
        break;
      }
    if (!inside) out.outside += g.weight(k) * J[k];
  }
  return out;
}

}  // namespace glvortex
