#pragma once

#include <string>
#include <vector>

#include "glvortex/workspace.hpp"

namespace glvortex {

struct VortexConfig {
  std::vector<Vec2> points;
  int N() const { return static_cast<int>(points.size()); }
};

// Throws DomainError for points outside, ConfigError for repeated points.
void validate_config(const DomainSpec& spec, const VortexConfig& config);
double min_separation(const VortexConfig& config);
double min_boundary_distance(const DomainSpec& spec, const VortexConfig& config);
// ρ_a = ¼ min{min_{i≠j}|a_i − a_j|, min_i d(a_i)}
double rho(const DomainSpec& spec, const VortexConfig& config);
// every d(a_i) >= hex^{-1/3}
bool in_M(const DomainSpec& spec, const VortexConfig& config, double hex);

struct ParamRegime {
  double hex = 1.0;
  double eps = 0.0;  // 0 when unused
  int N = 0;

  // ε^{99/100} max{N⁵ hex^{1/2}, hex²}
  double sigma_eps() const;
  // hex (|Ω| − hex^{-1/4}) / 2π
  static double N_bound(const DomainSpec& spec, double hex);
  static int N_max(const DomainSpec& spec, double hex);
  bool N_in_window(const DomainSpec& spec) const;
  // K1 <= hex <= k1 ε^{-1/4}
  bool hex_in_window(double K1, double k1) const;
};

// Cutoff χ_ε: 0 for d <= ½hex^{-1/3}, 1 for d >= hex^{-1/3}, quintic between.
double chi_eps(double d, double hex);
double chi_eps_deriv(double d, double hex);

// χ_ε s / (2 hex) on the grid.
ScalarField v_eps(const DiagLattice& lattice, const GridPtr& grid, double hex);
// max |(−Δ+1) v_ε| over interior nodes
double v_eps_residual(const Workspace& ws, double hex);

struct EnergyEval {
  double value = 0.0;
  std::vector<Vec2> grad;  // empty unless requested
};

// Renormalized energy Σ[2πhex ξ₀(a_i) + π s(a_i)] + 2π² Σ_{i≠j} G(a_i,a_j),
// via one superposed solve for Σ_j S̃(·,a_j). Coincident points give +inf.
EnergyEval evaluate_H(const Workspace& ws, const VortexConfig& config, double hex, bool modified, bool gradient);

double H_energy(const Workspace& ws, const VortexConfig& config, double hex);
double H_mod(const Workspace& ws, const VortexConfig& config, double hex);
std::vector<Vec2> grad_H(const Workspace& ws, const VortexConfig& config, double hex);
std::vector<Vec2> grad_H_mod(const Workspace& ws, const VortexConfig& config, double hex);

// −π Σ_{i≠j} log|a_i − a_j| + π Σ_{i,j} R(a_i,a_j)
double W_energy(const Workspace& ws, const VortexConfig& config);

// Σ_j R(·,a_j): harmonic with boundary data Σ_j log|x − a_j|.
ScalarField R_total(const OperatorHandle& laplace, const VortexConfig& config);
// Σ_j S̃(·,a_j): Helmholtz-free with boundary data −Σ_j K0(|x − a_j|).
ScalarField stilde_total(const OperatorHandle& helmholtz, const VortexConfig& config);

}  // namespace glvortex
