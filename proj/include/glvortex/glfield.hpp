#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "glvortex/renorm.hpp"

namespace glvortex {

struct ComplexField {
  ScalarField re, im;

  ComplexField() = default;
  explicit ComplexField(GridPtr grid) : re(grid), im(grid) {}
  const Grid& grid() const { return re.grid(); }
  const GridPtr& grid_ptr() const { return re.grid_ptr(); }
  double modulus(int k) const { return std::hypot(re[k], im[k]); }
  bool finite() const { return re.finite() && im.finite(); }
};

using ComplexFn = std::function<std::complex<double>(const Vec2&)>;
// Exact samples at interior and ghost nodes.
ComplexField sample_complex(const GridPtr& grid, const ComplexFn& f);

// Stream function of a divergence-free potential A = (∂₂B, −∂₁B); B = 0 on ∂Ω.
struct PotentialField {
  ScalarField B;
  VectorField A() const;
};
// Ghost values from the zero boundary trace.
PotentialField potential_from(ScalarField B);

// canonical: phase Σ arg(x − a_j) minus the conjugate of Σ_j R(·, a_j), so that
// the boundary carries no normal phase derivative. product: Σ arg(x − a_j) only.
enum class PhaseKind { canonical, product };

// ρ_core · e^{iθ}, ρ_core = Π_j min(|x − a_j|/ε, 1).
ComplexField ansatz_u(const GridPtr& grid, const VortexConfig& config, double eps,
                      PhaseKind phase = PhaseKind::canonical);
// Phase function of the ansatz (without the core profile).
std::function<double(const Vec2&)> ansatz_phase(const DomainSpec& spec, const VortexConfig& config,
                                                PhaseKind phase = PhaseKind::canonical);

// ∫ |∇u|²/2 + (|u|² − 1)²/4ε²
double E_energy(const ComplexField& u, double eps);
// ∂₁u¹∂₂u² − ∂₂u¹∂₁u²
ScalarField jacobian(const ComplexField& u);
// ½∫ |∇B|² + (ΔB + hex)²
double Phi_energy(const PotentialField& B, double hex);
// ∫ ½|(∇ − iA)u|² + ½(curl A − hex)² + (|u|² − 1)²/4ε²
double GL_energy(const ComplexField& u, const PotentialField& B, double hex, double eps);

struct SplitResidual {
  double GL = 0.0;
  double E = 0.0, BJ = 0.0, Phi = 0.0, R = 0.0;  // BJ = ∫ B Ju
  double absolute = 0.0;
  double scaled = 0.0;  // absolute / (1 + |GL|)
};
// GL = E − 2∫B Ju + Φ(B) + ½∫(|u|² − 1)|A|²
SplitResidual check_split_identity(const ComplexField& u, const PotentialField& B, double hex, double eps);

// Random smooth test pair: u a trigonometric polynomial, B = (1 − level) times one.
struct SmoothPair {
  ComplexFn u;
  std::function<double(const Vec2&)> B;
};
SmoothPair random_smooth_pair(const DomainSpec& spec, std::uint64_t seed);

// Winding of u/|u| along a circle, from summed phase increments.
double winding_number(const ComplexField& u, const Vec2& center, double radius, int samples = 720);

double kappa_GL(int N, double hex, double eps, double F_xi0, double gamma_hat);

struct GammaSample {
  int config = 0;
  int N = 0;
  double eps = 0.0;
  int resolution = 0;
  double E = 0.0, W = 0.0;
  double gamma = 0.0;
};
struct GammaEstimate {
  double gamma_hat = 0.0;
  double spread = 0.0;  // largest max − min across configs at one ε
  double drift = 0.0;   // max − min of the per-ε means
  int samples = 0;
  std::vector<double> eps_means;
  std::vector<GammaSample> table;
};
struct GammaOptions {
  double cells_per_eps = 6.0;
  int w_resolution = 128;
  PhaseKind phase = PhaseKind::canonical;
  int jobs = 1;
};
// gamma_hat = mean of [E(ansatz) − Nπ log(1/ε) − W(a)]/N over (config, ε).
GammaEstimate estimate_gamma(const DomainSpec& spec, const std::vector<VortexConfig>& configs,
                             const std::vector<double>& eps_list, const GammaOptions& opt = {});

struct VorticityMasses {
  std::vector<double> masses;  // ∫_{B(radius, a_i)} Ju
  double outside = 0.0;        // ∫ Ju off all balls
};
VorticityMasses vorticity_concentration(const ComplexField& u, const VortexConfig& config, double radius);

}  // namespace glvortex
