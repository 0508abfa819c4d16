#pragma once

#include <cstdint>
#include <vector>

#include "glvortex/obstacle.hpp"
#include "glvortex/renorm.hpp"

namespace glvortex {

// free: H̲ (modified energy) over Ω^N. constrained: H over {d >= hex^{-1/3}}^N.
enum class MinimizeTarget { free, constrained };

struct MinimizeOptions {
  int starts = 8;
  double t0 = 0.01;
  std::uint64_t seed = 1;
  int max_iters = 2000;
  int jobs = 1;
  MinimizeTarget target = MinimizeTarget::free;
  double grad_tol = 1e-3;  // times (1 + |E|)/diam
};

struct StartRecord {
  VortexConfig initial;
  VortexConfig final;
  double energy = 0.0;
  double grad_max = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct MinimizeReport {
  double hex = 0.0;
  VortexConfig best;
  double energy = 0.0;
  double grad_max = 0.0;
  double grad_tolerance = 0.0;
  double min_boundary_dist = 0.0;
  double min_separation = 0.0;
  int starts = 0;
  std::vector<int> iterations;
  std::vector<StartRecord> runs;
  bool converged = false;
  double t0 = 0.01;
  double t0_margin = 0.0;  // largest converged energy minus the best
  double runtime_s = 0.0;
};

MinimizeReport minimize_H(const Workspace& ws, double hex, int N, const MinimizeOptions& opt = {});

// Initial points: μ_λ-distributed with jitter, λ = hex/(2πN); uniform over
// {d >= hex^{-1/3}} when no equilibrium measure is available.
VortexConfig initial_config(const Workspace& ws, double hex, int N, std::uint64_t seed,
                            const ObstacleSolution* measure = nullptr);

struct SeparationCheck {
  double c0_hat = 0.0;
  double c1_hat = 0.0;
  bool pass = false;
};
SeparationCheck check_separation(const DomainSpec& spec, const MinimizeReport& report, double hex, double c0_floor = 0.0,
                                 double c1_floor = 0.0);

// 5 x 4 tensor cubic B-splines over the bounding box of Ω.
int test_function_count();
double test_function(const DomainSpec& spec, int index, const Vec2& p);

struct Discrepancy {
  double lambda = 0.0;
  double value = 0.0;               // max over the dictionary
  std::vector<double> per_function;
  bool inside_coincidence = false;  // every point lies in Σ_λ (up to one cell)
};
// Weighted point measure against μ_λ.
Discrepancy measure_discrepancy(const ObstacleSolution& mu, const std::vector<Vec2>& points,
                                const std::vector<double>& weights);
Discrepancy empirical_vs_equilibrium(const Workspace& ws, const MinimizeReport& report, double hex,
                                     const ObstacleSolution* measure = nullptr);

struct ScreenedPotential {
  ScalarField U;        // −φ_λ + (1/N) Σ_{j≠i} G(·, a_j)
  double gap = 0.0;     // ζ_λ(a_i) − min ζ_λ
  double inf_U = 0.0;
  double bound = 0.0;   // t₀/(4π²N)
  double slack = 0.0;   // 5 h ‖∇ζ_λ‖∞
};
ScreenedPotential screened_potential(const Workspace& ws, const MinimizeReport& report, double hex, int index,
                                     const ObstacleSolution& measure);

// All N potentials, sharing the superposed fields.
std::vector<ScreenedPotential> screened_potentials(const Workspace& ws, const MinimizeReport& report, double hex,
                                                   const ObstacleSolution& measure);

// m(λ) solve at λ = hex/(2πN).
ObstacleSolution equilibrium_measure(const Workspace& ws, double hex, int N);

}  // namespace glvortex
