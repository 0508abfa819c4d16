#pragma once

#include <vector>

#include "glvortex/workspace.hpp"

namespace glvortex {

enum class ObstacleMethod { active_set, pgs };

struct ObstacleOptions {
  ObstacleMethod method = ObstacleMethod::active_set;
  int max_iterations = 200;     // active-set updates
  int max_sweeps = 2000000;     // projected Gauss-Seidel sweeps
  double omega = 1.8;           // over-relaxation for PGS
  double pgs_tolerance = 1e-10; // max update per sweep
  double mass_tolerance = 1e-4; // |f - 1| for m(λ)
};

struct ObstacleSolution {
  double lambda = 0.0;
  double m = 0.0;
  ScalarField phi;       // φ_{λ,m}
  ScalarField zeta;      // λξ_ε + φ
  ScalarField mu;        // density of (−Δ+1)φ, zero off the coincidence set
  ScalarField w_eps;     // (Δ−1)ξ_ε
  ScalarField obstacle;  // −λξ_ε − m
  std::vector<unsigned char> coincidence;  // per node
  double f = 0.0;        // total mass of μ
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Minimizes ½∫|∇φ|² + φ² over φ >= −λξ_ε − m with zero boundary values.
ObstacleSolution solve_obstacle(const Workspace& ws, double hex, double lambda, double m,
                                const ObstacleOptions& opt = {}, const ObstacleSolution* warm = nullptr);
double f_value(const ObstacleSolution& sol);
// m(λ): the level with unit mass ∫(−Δ+1)φ = 1.
ObstacleSolution solve_m(const Workspace& ws, double hex, double lambda, const ObstacleOptions& opt = {});
// (|Ω| − hex^{-1/4})^{-1}
double lambda_floor(const DomainSpec& spec, double hex);

// f_{δ,m}(d(x)): −2ms/δ + ms²/δ² for s <= δ, −m beyond.
ScalarField barrier_eta(const GridPtr& grid, double delta, double m);

struct BarrierReport {
  double delta_lower = 0.0;  // √(m/λ)
  double delta_upper = 0.0;  // 2√(m/λ)
  bool collar_ok = false;    // 2√(m/λ) < d0
  int inner_violations = 0;  // coincidence nodes with d < √(m/λ) − h
  int outer_violations = 0;  // nodes with d >= 2√(m/λ) + h outside the coincidence set
  double lower_excess = 0.0; // max(η_lower − ζ)
  double upper_excess = 0.0; // max(ζ − η_upper)
  double c4 = 0.0;           // max(−ζ/d) over nodes with d >= h
  bool holds() const { return inner_violations == 0 && outer_violations == 0; }
};
BarrierReport check_barriers(const ObstacleSolution& sol);

double coincidence_area(const ObstacleSolution& sol);
// min d over coincidence nodes (inf when empty)
double dist_sigma_boundary(const ObstacleSolution& sol);
// smallest c3 with ζ >= −2√(c3 λ)(|Ω|−1/λ)d + λd² at every node with d >= dmin
double fit_c3(const ObstacleSolution& sol, double dmin);
// max over nodes of min(φ − obstacle, μ) and of the negative parts
double kkt_violation(const ObstacleSolution& sol);

}  // namespace glvortex
