#include "glvortex/obstacle.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>

#include "glvortex/errors.hpp"

namespace glvortex {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Mask = std::vector<char>;

// Factorization of A restricted to the inactive unknowns.
class Reduced {
 public:
  Reduced(const SpMat& A, const Mask& active) : A_(A), map_(A.rows(), -1) {
    for (int r = 0; r < A.rows(); ++r)
      if (!active[r]) {
        map_[r] = static_cast<int>(inactive_.size());
        inactive_.push_back(r);
      }
    const int n = static_cast<int>(inactive_.size());
    if (n == 0) return;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * static_cast<std::size_t>(n));
    for (int c : inactive_)
      for (SpMat::InnerIterator it(A, c); it; ++it)
        if (map_[it.row()] >= 0) trip.emplace_back(map_[it.row()], map_[c], it.value());
    SpMat AII(n, n);
    AII.setFromTriplets(trip.begin(), trip.end());
    ldlt_.compute(AII);
    if (ldlt_.info() != Eigen::Success) throw NumericError("reduced factorization failed", 1.0);
  }

  // φ = c on the active set, A_II φ_I = −(A c_A)_I.
  Vec solve(const Vec& c, const Mask& active) const {
    Vec cA = c;
    for (int r = 0; r < cA.size(); ++r)
      if (!active[r]) cA[r] = 0.0;
    if (inactive_.empty()) return cA;
    const Vec y = A_ * cA;
    Vec b(inactive_.size());
    for (std::size_t i = 0; i < inactive_.size(); ++i) b[i] = -y[inactive_[i]];
    const Vec x = ldlt_.solve(b);
    for (std::size_t i = 0; i < inactive_.size(); ++i) cA[inactive_[i]] = x[i];
    return cA;
  }

 private:
  const SpMat& A_;
  std::vector<int> map_;
  std::vector<int> inactive_;
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

struct Problem {
  const Workspace& ws;
  double hex, lambda;
  const SpMat& A;
  Vec psi0;  // −λξ_ε
  Vec w;     // quadrature weights
  double scale;

  Problem(const Workspace& ws_, double hex_, double lambda_)
      : ws(ws_), hex(hex_), lambda(lambda_), A(ws_.helmholtz().matrix()) {
    const ScalarField& xe = ws.xi_eps(hex);
    psi0 = -lambda * to_unknowns(xe);
    const Grid& g = *ws.grid();
    w.resize(g.interior_count());
    for (int k : g.interior_nodes()) w[g.unknown(k)] = g.weight(k);
    scale = std::max(1.0, psi0.cwiseAbs().maxCoeff());
  }
  double m_max() const { return psi0.maxCoeff() > 0.0 ? psi0.maxCoeff() : 0.0; }
};

struct Iterate {
  Vec phi;
  Mask active;
  int iterations = 0;
};

Mask initial_active(const Problem& P, double m) {
  Mask a(P.psi0.size());
  for (int r = 0; r < P.psi0.size(); ++r) a[r] = P.psi0[r] - m > 0.0;
  return a;
}

// Primal-dual active set method for the LCP φ >= ψ, Aφ >= 0, (φ−ψ)·Aφ = 0.
Iterate active_set(const Problem& P, double m, Mask active, int max_iterations) {
  const Vec psi = P.psi0.array() - m;
  const double tol = 1e-13 * P.scale;
  for (int it = 1; it <= max_iterations; ++it) {
    Reduced red(P.A, active);
    Vec phi = red.solve(psi, active);
    const Vec mu = P.A * phi;
    Mask next(active.size());
    bool same = true;
    for (int r = 0; r < phi.size(); ++r) {
      next[r] = active[r] ? mu[r] > -tol : phi[r] < psi[r] - tol;
      same &= next[r] == active[r];
    }
    if (same) return {std::move(phi), std::move(active), it};
    active.swap(next);
  }
  throw NumericError("active-set iteration did not settle", static_cast<double>(max_iterations));
}

Iterate pgs(const Problem& P, double m, const ObstacleOptions& opt, const Vec* start) {
  const Vec psi = P.psi0.array() - m;
  Vec phi = start ? Vec(start->cwiseMax(psi)) : Vec(psi.cwiseMax(0.0));
  const Vec diag = P.A.diagonal();
  double change = 0.0;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    change = 0.0;
    for (int r = 0; r < phi.size(); ++r) {
      double ar = 0.0;
      for (SpMat::InnerIterator it(P.A, r); it; ++it) ar += it.value() * phi[it.row()];
      const double next = std::max(psi[r], phi[r] - opt.omega * ar / diag[r]);
      change = std::max(change, std::abs(next - phi[r]));
      phi[r] = next;
    }
    if (change <= opt.pgs_tolerance) {
      Mask active(phi.size());
      for (int r = 0; r < phi.size(); ++r) active[r] = phi[r] - psi[r] <= 1e-9 * P.scale;
      return {std::move(phi), std::move(active), sweep};
    }
  }
  throw NumericError("projected Gauss-Seidel hit the sweep cap", change);
}

ObstacleSolution assemble(const Problem& P, double m, const Iterate& itr) {
  const Workspace& ws = P.ws;
  const GridPtr& g = ws.grid();
  ObstacleSolution s;
  s.lambda = P.lambda;
  s.m = m;
  s.iterations = itr.iterations;
  s.phi = from_unknowns(g, itr.phi);
  const std::vector<double> zero_b(g->cuts().size(), 0.0);
  fill_ghosts(s.phi, &zero_b);
  const ScalarField& xe = ws.xi_eps(P.hex);
  s.zeta = P.lambda * xe + s.phi;
  s.obstacle = -P.lambda * xe;
  s.obstacle += -m;
  s.w_eps = -1.0 * ws.helmholtz().apply(xe);
  const Vec mu = P.A * itr.phi;
  s.mu = ScalarField(g);
  s.coincidence.assign(g->node_count(), 0);
  const double thr = 1e-7 * (1.0 + std::abs(m));
  for (int k : g->interior_nodes()) {
    const int r = g->unknown(k);
    if (itr.active[r]) s.mu[k] = std::max(mu[r], 0.0);
    s.coincidence[k] = s.phi[k] - s.obstacle[k] <= thr;
  }
  s.f = f_value(s);
  s.kkt_residual = kkt_violation(s);
  return s;
}

}  // namespace

double lambda_floor(const DomainSpec& spec, double hex) { return 1.0 / (spec.area() - std::pow(hex, -0.25)); }

double f_value(const ObstacleSolution& sol) { return integrate(sol.mu); }

double kkt_violation(const ObstacleSolution& sol) {
  const Grid& g = sol.phi.grid();
  double scale = 1.0;
  for (int k : g.interior_nodes()) scale = std::max(scale, std::abs(sol.mu[k]));
  double v = 0.0;
  for (int k : g.interior_nodes()) {
    const double gap = sol.phi[k] - sol.obstacle[k];
    v = std::max(v, std::max(-gap, 0.0));
    v = std::max(v, std::max(-sol.mu[k], 0.0) / scale);
    v = std::max(v, std::min(std::max(gap, 0.0), std::max(sol.mu[k], 0.0) / scale));
  }
  return v;
}

ObstacleSolution solve_obstacle(const Workspace& ws, double hex, double lambda, double m, const ObstacleOptions& opt,
                                const ObstacleSolution* warm) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(m >= 0.0)) throw ConfigError("m must be nonnegative");
  const Problem P(ws, hex, lambda);
  if (opt.method == ObstacleMethod::pgs) {
    Vec start;
    if (warm) start = to_unknowns(warm->phi);
    return assemble(P, m, pgs(P, m, opt, warm ? &start : nullptr));
  }
  Mask init = initial_active(P, m);
  if (warm) {
    const Grid& g = *ws.grid();
    for (int k : g.interior_nodes()) init[g.unknown(k)] = warm->coincidence[k] && init[g.unknown(k)];
  }
  return assemble(P, m, active_set(P, m, std::move(init), opt.max_iterations));
}

namespace {

// Joint update of the active set and m: on a fixed active set φ and f are
// affine in m, so the unit-mass level is solved exactly before each update.
bool joint_newton(const Problem& P, double tol, int max_iterations, double m_guess, Iterate& out, double& m_out) {
  double m = m_guess;
  Mask active = initial_active(P, m);
  const Vec ones = Vec::Ones(P.psi0.size());
  const double eps = 1e-13 * P.scale;
  for (int it = 1; it <= max_iterations; ++it) {
    bool any = false;
    for (char a : active) any |= a;
    if (!any) return false;
    Reduced red(P.A, active);
    const Vec phi0 = red.solve(P.psi0, active);
    const Vec phi1 = red.solve(ones, active);
    const Vec mu0 = P.A * phi0, mu1 = P.A * phi1;
    double f0 = 0.0, f1 = 0.0;
    for (int r = 0; r < phi0.size(); ++r)
      if (active[r]) {
        f0 += P.w[r] * mu0[r];
        f1 += P.w[r] * mu1[r];
      }
    if (!(f1 > 0.0)) return false;
    m = std::clamp((f0 - 1.0) / f1, 0.0, P.m_max());
    const Vec phi = phi0 - m * phi1;
    const Vec mu = mu0 - m * mu1;
    Mask next(active.size());
    bool same = true;
    for (int r = 0; r < phi.size(); ++r) {
      const double psi = P.psi0[r] - m;
      next[r] = active[r] ? mu[r] > -eps : phi[r] < psi - eps;
      same &= next[r] == active[r];
    }
    if (same) {
      double f = 0.0;
      for (int r = 0; r < phi.size(); ++r)
        if (active[r]) f += P.w[r] * mu[r];
      if (std::abs(f - 1.0) > tol) return false;
      out = {phi, active, it};
      m_out = m;
      return true;
    }
    active.swap(next);
  }
  return false;
}

}  // namespace

ObstacleSolution solve_m(const Workspace& ws, double hex, double lambda, const ObstacleOptions& opt) {
  const DomainSpec& spec = ws.spec();
  if (!(lambda > lambda_floor(spec, hex)))
    throw PreconditionError("lambda must exceed (|Omega| - hex^(-1/4))^(-1) so that f(lambda,0) > 1");
  const Problem P(ws, hex, lambda);
  const double mmax = P.m_max();

  ObstacleSolution at0 = solve_obstacle(ws, hex, lambda, 0.0, opt);
  if (!(at0.f > 1.0)) throw PreconditionError("f(lambda, 0) <= 1: lambda too small for a unit-mass level");

  if (opt.method == ObstacleMethod::active_set) {
    // initial level from the quadratic law m ≈ (|Ω| − 1/λ)²/|Ω|
    const double gap = std::max(spec.area() - 1.0 / lambda, 0.0);
    Iterate itr;
    double m = 0.0;
    if (joint_newton(P, opt.mass_tolerance, opt.max_iterations, std::min(gap * gap / spec.area(), 0.5 * mmax), itr, m))
      return assemble(P, m, itr);
  }

  // Illinois regula falsi on f(λ,m) − 1 over [0, λ max ξ_ε].
  double a = 0.0, fa = at0.f - 1.0;
  double b = mmax, fb = -1.0;
  ObstacleSolution best = at0, warm = at0;
  int side = 0;
  for (int it = 0; it < 60; ++it) {
    double c = (it % 8 == 7) ? 0.5 * (a + b) : b - fb * (b - a) / (fb - fa);
    if (!(c > a && c < b)) c = 0.5 * (a + b);
    ObstacleSolution sc = solve_obstacle(ws, hex, lambda, c, opt, &warm);
    const double fc = sc.f - 1.0;
    warm = sc;
    if (std::abs(fc) <= opt.mass_tolerance) return sc;
    if (fc > 0.0) {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    } else {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    }
    best = std::move(sc);
  }
  throw NumericError("unit-mass level not found", best.f - 1.0);
}

ScalarField barrier_eta(const GridPtr& grid, double delta, double m) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  return ScalarField::sample(grid, [&](const Vec2& p) {
    const double s = signed_distance(grid->spec(), p);
    if (s >= delta) return -m;
    return -2.0 * m * s / delta + m * s * s / (delta * delta);
  });
}

BarrierReport check_barriers(const ObstacleSolution& sol) {
  const Grid& g = sol.phi.grid();
  BarrierReport rep;
  const double r = std::sqrt(sol.m / sol.lambda);
  rep.delta_lower = r;
  rep.delta_upper = 2.0 * r;
  rep.collar_ok = 2.0 * r < g.spec().d0();
  const double h = g.h();
  for (int k : g.interior_nodes()) {
    const double d = g.distance(k);
    if (sol.coincidence[k] && d < r - h) ++rep.inner_violations;
    if (!sol.coincidence[k] && d >= 2.0 * r + h) ++rep.outer_violations;
    if (r > 0.0) {
      auto eta = [&](double delta) {
        return d >= delta ? -sol.m : -2.0 * sol.m * d / delta + sol.m * d * d / (delta * delta);
      };
      rep.lower_excess = std::max(rep.lower_excess, eta(r) - sol.zeta[k]);
      rep.upper_excess = std::max(rep.upper_excess, sol.zeta[k] - eta(2.0 * r));
    }
    if (d >= h) rep.c4 = std::max(rep.c4, -sol.zeta[k] / d);
  }
  return rep;
}

double coincidence_area(const ObstacleSolution& sol) {
  const Grid& g = sol.phi.grid();
  double a = 0.0;
  for (int k : g.interior_nodes())
    if (sol.coincidence[k]) a += g.weight(k);
  return a;
}

double dist_sigma_boundary(const ObstacleSolution& sol) {
  const Grid& g = sol.phi.grid();
  double d = std::numeric_limits<double>::infinity();
  for (int k : g.interior_nodes())
    if (sol.coincidence[k]) d = std::min(d, g.distance(k));
  return d;
}

double fit_c3(const ObstacleSolution& sol, double dmin) {
  const Grid& g = sol.phi.grid();
  const double gap = g.spec().area() - 1.0 / sol.lambda;
  if (!(gap > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double root = 0.0;
  for (int k : g.interior_nodes()) {
    const double d = g.distance(k);
    if (d < dmin) continue;
    root = std::max(root, (sol.lambda * d * d - sol.zeta[k]) / (2.0 * std::sqrt(sol.lambda) * gap * d));
  }
  return root * root;
}

}  // namespace glvortex
