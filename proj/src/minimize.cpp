#include "glvortex/minimize.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "glvortex/bessel.hpp"
#include "glvortex/errors.hpp"

namespace glvortex {

namespace {

constexpr double kPi = std::numbers::pi;
namespace bs = bessel;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x9e3779b9u};
  return std::mt19937_64(seq);
}

bool separated(const std::vector<Vec2>& pts, const Vec2& p, double sep) {
  for (const Vec2& q : pts)
    if ((p - q).norm() < sep) return false;
  return true;
}

double max_norm(const std::vector<Vec2>& g) {
  double m = 0.0;
  for (const Vec2& v : g) m = std::max(m, v.cwiseAbs().maxCoeff());
  return m;
}

double dot(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

class Descent {
 public:
  Descent(const Workspace& ws, double hex, const MinimizeOptions& opt)
      : ws_(ws), spec_(ws.spec()), hex_(hex), opt_(opt), h_(ws.h()), thr_(std::pow(hex, -1.0 / 3.0)) {}

  StartRecord run(const VortexConfig& start) const {
    StartRecord rec;
    rec.initial = start;
    VortexConfig x = start;
    project(x);
    EnergyEval ev = eval(x);
    std::vector<Vec2> g = projected(x, ev.grad);
    const double diam = spec_.diameter();
    const double cap = 0.1 * diam;
    double gmax = max_norm(g);
    double alpha = gmax > 0.0 ? h_ / gmax : 1.0;
    int it = 0;
    for (; it < opt_.max_iters; ++it) {
      if (gmax <= tolerance(ev.value)) {
        rec.converged = true;
        break;
      }
      bool accepted = false;
      VortexConfig trial;
      EnergyEval tv;
      const double gg = dot(g, g);
      for (int tries = 0; tries < 60; ++tries, alpha *= 0.5) {
        trial = x;
        for (int i = 0; i < x.N(); ++i) trial.points[i] -= alpha * g[i];
        project(trial);
        if (!feasible(trial)) continue;
        tv = eval(trial);
        if (tv.value <= ev.value - 1e-4 * alpha * gg) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      if (tv.value > ev.value) throw NumericError("descent step increased the energy", tv.value - ev.value);
      std::vector<Vec2> gn = projected(trial, tv.grad);
      std::vector<Vec2> s(x.N()), y(x.N());
      for (int i = 0; i < x.N(); ++i) {
        s[i] = trial.points[i] - x.points[i];
        y[i] = gn[i] - g[i];
      }
      const double sy = dot(s, y);
      alpha = sy > 0.0 ? dot(s, s) / sy : 2.0 * alpha;
      x = std::move(trial);
      ev = std::move(tv);
      g = std::move(gn);
      gmax = max_norm(g);
      if (gmax > 0.0) alpha = std::clamp(alpha, 1e-14 / gmax, cap / gmax);
    }
    if (!rec.converged && gmax <= tolerance(ev.value)) rec.converged = true;
    rec.final = std::move(x);
    rec.energy = ev.value;
    rec.grad_max = gmax;
    rec.iterations = it;
    return rec;
  }

  double tolerance(double e) const { return opt_.grad_tol * (1.0 + std::abs(e)) / spec_.diameter(); }

 private:
  EnergyEval eval(const VortexConfig& c) const {
    return evaluate_H(ws_, c, hex_, opt_.target == MinimizeTarget::free, true);
  }

  // Lowest admissible distance to ∂Ω: hex^{-1/3} for the constrained class, two cells otherwise.
  double wall() const { return opt_.target == MinimizeTarget::free ? 2.0 * h_ : thr_; }

  bool feasible(const VortexConfig& c) const {
    for (const Vec2& p : c.points)
      if (signed_distance(spec_, p) < wall() - 1e-12) return false;
    return c.N() < 2 || min_separation(c) >= 2.0 * h_;
  }

  // Pulls points back to {d >= wall} along the normal.
  void project(VortexConfig& c) const {
    for (Vec2& p : c.points) {
      const DistanceInfo di = distance_info(spec_, p);
      if (di.d < wall()) p = di.nearest + wall() * di.gradient;
    }
  }

  // Drops the outward normal part of the gradient for points resting on the wall.
  std::vector<Vec2> projected(const VortexConfig& c, std::vector<Vec2> g) const {
    for (int i = 0; i < c.N(); ++i) {
      const DistanceInfo di = distance_info(spec_, c.points[i]);
      const double outward = -g[i].dot(di.gradient);  // −g moves along −∇d when positive
      if (di.d <= wall() + 1e-12 && outward < 0.0) g[i] -= g[i].dot(di.gradient) * di.gradient;
    }
    return g;
  }

  const Workspace& ws_;
  const DomainSpec& spec_;
  double hex_;
  MinimizeOptions opt_;
  double h_, thr_;
};

Vec2 uniform_point(const DomainSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-spec.a, spec.a), uy(-spec.b, spec.b);
  return {ux(rng), uy(rng)};
}

}  // namespace

ObstacleSolution equilibrium_measure(const Workspace& ws, double hex, int N) {
  if (N < 1) throw ConfigError("N must be positive");
  return solve_m(ws, hex, hex / (2.0 * kPi * N));
}

VortexConfig initial_config(const Workspace& ws, double hex, int N, std::uint64_t seed,
                            const ObstacleSolution* measure) {
  const Grid& g = *ws.grid();
  const DomainSpec& spec = ws.spec();
  const double thr = std::pow(hex, -1.0 / 3.0), sep = 2.0 * g.h();
  auto rng = stream(seed, 0);
  VortexConfig c;
  if (measure) {
    std::vector<double> wts;
    std::vector<int> nodes;
    for (int k : g.interior_nodes())
      if (measure->mu[k] > 0.0) {
        nodes.push_back(k);
        wts.push_back(measure->mu[k] * g.weight(k));
      }
    if (!nodes.empty()) {
      std::discrete_distribution<std::size_t> pick(wts.begin(), wts.end());
      std::uniform_real_distribution<double> jit(-0.5 * g.h(), 0.5 * g.h());
      for (int tries = 0; c.N() < N && tries < 200 * N + 1000; ++tries) {
        const Vec2 p = g.point(nodes[pick(rng)]) + Vec2(jit(rng), jit(rng));
        if (signed_distance(spec, p) >= thr && separated(c.points, p, sep)) c.points.push_back(p);
      }
    }
  }
  for (int tries = 0; c.N() < N; ++tries) {
    if (tries > 1000000) throw ConfigError("could not place the requested number of points");
    const Vec2 p = uniform_point(spec, rng);
    if (signed_distance(spec, p) >= thr && separated(c.points, p, sep)) c.points.push_back(p);
  }
  return c;
}

MinimizeReport minimize_H(const Workspace& ws, double hex, int N, const MinimizeOptions& opt) {
  const DomainSpec& spec = ws.spec();
  const auto t_begin = std::chrono::steady_clock::now();
  if (!(hex >= 1.0)) throw ConfigError("hex must be at least 1");
  if (opt.starts < 1) throw ConfigError("starts must be positive");
  if (N < 1 || N > ParamRegime::N_bound(spec, hex)) {
    std::ostringstream os;
    os << "N = " << N << " outside 1 <= N <= h_ex/2π (|Ω|−h_ex^{−1/4}) = " << ParamRegime::N_bound(spec, hex);
    throw PreconditionError(os.str());
  }

  std::unique_ptr<ObstacleSolution> measure;
  try {
    measure = std::make_unique<ObstacleSolution>(equilibrium_measure(ws, hex, N));
  } catch (const PreconditionError&) {
    // λ at the floor of the window: fall back to uniform starts
  }

  const Descent descent(ws, hex, opt);
  std::vector<StartRecord> runs(opt.starts);
  std::vector<VortexConfig> initial(opt.starts);
  for (int s = 0; s < opt.starts; ++s) initial[s] = initial_config(ws, hex, N, opt.seed * 1000003ull + s, measure.get());

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&] {
    for (int s = next++; s < opt.starts; s = next++) {
      try {
        runs[s] = descent.run(initial[s]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min(opt.jobs, opt.starts));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  MinimizeReport rep;
  rep.hex = hex;
  rep.starts = opt.starts;
  rep.t0 = opt.t0;
  int best = -1;
  double worst = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < opt.starts; ++s) {
    rep.iterations.push_back(runs[s].iterations);
    if (!runs[s].converged) continue;
    worst = std::max(worst, runs[s].energy);
    if (best < 0 || runs[s].energy < runs[best].energy) best = s;
  }
  if (best < 0) {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& r : runs) g = std::min(g, r.grad_max);
    throw NumericError("no start reached the gradient tolerance", g);
  }
  const StartRecord& b = runs[best];
  rep.best = b.final;
  rep.energy = b.energy;
  rep.grad_max = b.grad_max;
  rep.grad_tolerance = descent.tolerance(b.energy);
  rep.min_boundary_dist = min_boundary_distance(spec, rep.best);
  rep.min_separation = N > 1 ? min_separation(rep.best) : std::numeric_limits<double>::infinity();
  rep.converged = true;
  rep.t0_margin = worst - b.energy;
  rep.runs = std::move(runs);
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return rep;
}

SeparationCheck check_separation(const DomainSpec&, const MinimizeReport& report, double hex, double c0_floor,
                                 double c1_floor) {
  SeparationCheck c;
  c.c0_hat = report.min_boundary_dist * std::pow(hex, 0.25);
  c.c1_hat = report.min_separation * std::sqrt(hex);
  c.pass = report.converged && c.c0_hat >= c0_floor && c.c1_hat >= c1_floor;
  return c;
}

int test_function_count() { return 20; }

namespace {

// Cardinal cubic B-spline on [−2, 2].
double bspline3(double t) {
  t = std::abs(t);
  if (t >= 2.0) return 0.0;
  if (t >= 1.0) return (2.0 - t) * (2.0 - t) * (2.0 - t) / 6.0;
  return (4.0 - 6.0 * t * t + 3.0 * t * t * t) / 6.0;
}

}  // namespace

double test_function(const DomainSpec& spec, int index, const Vec2& p) {
  if (index < 0 || index >= 20) throw ConfigError("test function index out of range");
  const int i = index % 5, j = index / 5;
  const double dx = 2.0 * spec.a / 4.0, dy = 2.0 * spec.b / 3.0;
  return bspline3((p.x() + spec.a - i * dx) / dx) * bspline3((p.y() + spec.b - j * dy) / dy);
}

Discrepancy measure_discrepancy(const ObstacleSolution& mu, const std::vector<Vec2>& points,
                                const std::vector<double>& weights) {
  if (points.size() != weights.size()) throw ConfigError("points and weights differ in length");
  const Grid& g = mu.mu.grid();
  const DomainSpec& spec = g.spec();
  Discrepancy d;
  d.lambda = mu.lambda;
  for (int f = 0; f < test_function_count(); ++f) {
    double ref = 0.0, emp = 0.0;
    for (int k : g.interior_nodes())
      if (mu.mu[k] != 0.0) ref += mu.mu[k] * g.weight(k) * test_function(spec, f, g.point(k));
    for (std::size_t i = 0; i < points.size(); ++i) emp += weights[i] * test_function(spec, f, points[i]);
    d.per_function.push_back(std::abs(emp - ref));
    d.value = std::max(d.value, d.per_function.back());
  }
  d.inside_coincidence = true;
  for (const Vec2& p : points) {
    const int i0 = static_cast<int>(std::floor((p.x() - g.x0()) / g.h()));
    const int j0 = static_cast<int>(std::floor((p.y() - g.y0()) / g.h()));
    bool hit = false;
    for (int dj = 0; dj <= 1; ++dj)
      for (int di = 0; di <= 1; ++di) {
        if (!g.in_box(i0 + di, j0 + dj)) continue;
        const int k = g.index(i0 + di, j0 + dj);
        hit |= g.interior(k) && mu.coincidence[k];
      }
    d.inside_coincidence &= hit;
  }
  return d;
}

Discrepancy empirical_vs_equilibrium(const Workspace& ws, const MinimizeReport& report, double hex,
                                     const ObstacleSolution* measure) {
  const int N = report.best.N();
  std::unique_ptr<ObstacleSolution> own;
  if (!measure) {
    own = std::make_unique<ObstacleSolution>(equilibrium_measure(ws, hex, N));
    measure = own.get();
  }
  return measure_discrepancy(*measure, report.best.points, std::vector<double>(N, 1.0 / N));
}

std::vector<ScreenedPotential> screened_potentials(const Workspace& ws, const MinimizeReport& report, double hex,
                                                   const ObstacleSolution& measure) {
  (void)hex;
  const VortexConfig& cfg = report.best;
  const int N = cfg.N();
  const Grid& g = *ws.grid();
  // Σ_j [K0(|x − a_j|) + S̃(x, a_j)] once; each U_i removes its own term
  ScalarField all(ws.grid());
  if (N > 1) {
    all = stilde_total(ws.helmholtz(), cfg);
    for (int k : g.interior_nodes())
      for (const Vec2& a : cfg.points) all[k] += bs::K0(std::max((g.point(k) - a).norm(), 1e-3 * g.h()));
  }
  const double zmin = measure.zeta.min_interior();
  const VectorField dz = gradient_field(measure.zeta);
  double gz = 0.0;
  for (int k : g.interior_nodes()) gz = std::max(gz, std::hypot(dz.x[k], dz.y[k]));

  std::vector<ScreenedPotential> out(N);
  for (int i = 0; i < N; ++i) {
    ScreenedPotential& sp = out[i];
    const Vec2& ai = cfg.points[i];
    sp.U = -1.0 * measure.phi;
    if (N > 1) {
      const ScalarField own = stilde_field(ws.helmholtz(), ai);
      for (int k : g.interior_nodes())
        sp.U[k] += (all[k] - own[k] - bs::K0(std::max((g.point(k) - ai).norm(), 1e-3 * g.h()))) / (2.0 * kPi * N);
      fill_ghosts(sp.U);
    }
    sp.inf_U = sp.U.min_interior();
    sp.gap = interpolate(measure.zeta, ai) - zmin;
    sp.bound = report.t0 / (4.0 * kPi * kPi * N);
    sp.slack = 5.0 * g.h() * gz;
  }
  return out;
}

ScreenedPotential screened_potential(const Workspace& ws, const MinimizeReport& report, double hex, int index,
                                     const ObstacleSolution& measure) {
  const int N = report.best.N();
  if (index < 0 || index >= N) throw ConfigError("vortex index out of range");
  VortexConfig others;
  for (int j = 0; j < N; ++j)
    if (j != index) others.points.push_back(report.best.points[j]);
  const Grid& g = *ws.grid();
  ScreenedPotential sp;
  sp.U = -1.0 * measure.phi;
  if (others.N() > 0) {
    const ScalarField T = stilde_total(ws.helmholtz(), others);
    for (int k : g.interior_nodes()) {
      double sing = 0.0;
      for (const Vec2& a : others.points) sing += bs::K0(std::max((g.point(k) - a).norm(), 1e-3 * g.h()));
      sp.U[k] += (sing + T[k]) / (2.0 * kPi * N);
    }
    fill_ghosts(sp.U);
  }
  (void)hex;
  sp.inf_U = sp.U.min_interior();
  sp.gap = interpolate(measure.zeta, report.best.points[index]) - measure.zeta.min_interior();
  sp.bound = report.t0 / (4.0 * kPi * kPi * N);
  const VectorField dz = gradient_field(measure.zeta);
  double gz = 0.0;
  for (int k : g.interior_nodes()) gz = std::max(gz, std::hypot(dz.x[k], dz.y[k]));
  sp.slack = 5.0 * g.h() * gz;
  return sp;
}

}  // namespace glvortex
