#pragma once

#include "glvortex/renorm.hpp"

namespace glvortex {

struct CouplingBundle {
  VortexConfig config;
  double hex = 0.0;
  ScalarField w1;    // 2π Σ G(·, a_j)
  ScalarField B1;    // −ΔB₁ = w₁, B₁ = 0 on ∂Ω
  ScalarField beta;  // −hex ξ₀ + B₁
  double min_phi_value = 0.0;
};

// Mean of log|x| over the axis-aligned square of side h centred at c.
double cell_average_log(const Vec2& c, double h);
// Mean of K0(|x|) over the same square.
double cell_average_K0(const Vec2& c, double h);

// Nodes within three cells of a source carry cell averages of the log part.
ScalarField solve_w1(const Workspace& ws, const VortexConfig& config);
ScalarField solve_B1(const Workspace& ws, const ScalarField& w1);
// hex² F(ξ₀) + 2π hex Σ ξ₀(a_i) − π Σ B₁(a_i)
// B1(a_i) by singularity-subtracted interpolation.
std::vector<double> B1_at_sources(const VortexConfig& config, const ScalarField& B1);
double min_phi_value(const Workspace& ws, const VortexConfig& config, double hex, const ScalarField& B1);
CouplingBundle coupling_bundle(const Workspace& ws, const VortexConfig& config, double hex);

// ∫w₁ − ∮∂_n w₁, which is 2πN for the exact field.
double w1_total_mass(const Workspace& ws, const ScalarField& w1);

// Nodes whose Chebyshev distance to a source is at most halo cells are skipped.
bool near_source(const Grid& grid, int node, const VortexConfig& config, int halo = 2);

// max |B₁ − Σ_j (R(·,a_j) − S(·,a_j))| off the halos
double check_B1_identity(const Workspace& ws, const VortexConfig& config);
double check_B1_identity(const Workspace& ws, const CouplingBundle& bundle);

struct WHResidual {
  double H = 0.0, W = 0.0, F = 0.0, min_phi = 0.0;
  double absolute = 0.0;
  double scaled = 0.0;  // absolute / (1 + |H|)
  // π Σ S(a_i,a_j) − [π Σ R(a_i,a_j) − π Σ B₁(a_i)]
  double reduction = 0.0;
};
WHResidual check_WH_identity(const Workspace& ws, const VortexConfig& config, double hex);

// max |(hex + Δβ)² − (hex ξ₀ + w₁)²| / (1 + max (hex ξ₀ + w₁)²) off the halos
double beta_consistency(const Workspace& ws, const CouplingBundle& bundle);

}  // namespace glvortex
