#pragma once

#include "glvortex/elliptic.hpp"

namespace glvortex {

// Fields of one source point y. 2πG = S̃ + K0(|x-y|), S = 2πG + log|x-y|.
struct GreenBundle {
  Vec2 source;
  ScalarField stilde;
  ScalarField G;
  ScalarField S;
  ScalarField R;  // empty unless a Laplace handle was supplied
  bool accuracy_warning = false;
};

// (-Δ+1)S̃ = 0 with boundary data -K0(|x-y|).
ScalarField stilde_field(const OperatorHandle& helmholtz, const Vec2& y, bool* warning = nullptr);
GreenBundle green_G(const OperatorHandle& helmholtz, const Vec2& y, const OperatorHandle* laplace = nullptr);
// G(x, y) with the singular part evaluated exactly.
double green_value(const GreenBundle& bundle, const Vec2& x);
// Harmonic extension of log|x-y|.
ScalarField laplace_R_field(const OperatorHandle& laplace, const Vec2& y, bool* warning = nullptr);

// s(p) = S̃(p,p) + L from a dedicated solve.
double s_point(const OperatorHandle& helmholtz, const Vec2& p, bool* warning = nullptr);

// Boundary profile of the diagonal: S̃(x,x) ≈ -K0(2d) near the boundary,
// cut off smoothly between d0 and 2 d0.
double s_singular(const DomainSpec& spec, double d);
double s_singular_deriv(const DomainSpec& spec, double d);

// Smooth interpolant of s(x) = S(x,x). Point solves on a coarse lattice give
// the remainder s - L - s_singular, which is extended to the boundary band
// and interpolated by cubic convolution.
class DiagLattice {
 public:
  DiagLattice(const OperatorHandle& helmholtz, int lattice_resolution = 16);
  DiagLattice(const DomainSpec& spec, int lattice_resolution, const std::vector<double>& sampled_remainder,
              double min_distance);

  double s(const Vec2& p) const;
  Vec2 grad_s(const Vec2& p) const;

  int lattice_resolution() const { return lattice_->resolution(); }
  int samples() const { return samples_; }
  double min_distance() const { return min_distance_; }
  // Remainder at lattice nodes that were sampled (NaN elsewhere).
  const std::vector<double>& sampled() const { return sampled_; }

 private:
  void finish();

  DomainSpec spec_;
  GridPtr lattice_;
  ScalarField remainder_;
  std::vector<double> sampled_;
  double min_distance_ = 0.0;
  int samples_ = 0;
};

// s at the grid nodes; ghosts are extrapolated.
ScalarField s_diag(const DiagLattice& lattice, const GridPtr& grid);

// Fitted constants of |s| <= C(|log d|+1) and |∇s| <= C/d over nodes with d >= dmin.
struct SEstimate {
  double c_value;
  double c_gradient;
};
SEstimate s_estimates(const DiagLattice& lattice, const Grid& grid, double dmin);

}  // namespace glvortex
