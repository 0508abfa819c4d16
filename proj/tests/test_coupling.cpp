#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "glvortex/bessel.hpp"
#include "glvortex/coupling.hpp"
#include "glvortex/greens.hpp"

using namespace glvortex;
namespace bs = glvortex::bessel;
constexpr double kPi = std::numbers::pi;

namespace {

Workspace& disk(int res) {
  static Workspace w64(DomainSpec::disk(), 64), w128(DomainSpec::disk(), 128);
  return res == 64 ? w64 : w128;
}

const VortexConfig kCenter{{{0.0, 0.0}}};
const VortexConfig kTriple{{{0.31, 0.12}, {-0.27, 0.36}, {-0.05, -0.44}}};

}  // namespace

TEST_CASE("cell averages of the logarithm") {
  // dblquad of log(x²+y²)/2 over [0.3,1.3]x[-0.2,0.8]
  CHECK(cell_average_log({0.8, 0.3}, 1.0) == doctest::Approx(0.5 * -0.3115185026154844).epsilon(1e-12));
  // centred unit cell: ½∫∫ log(x²+y²) = ½(-2.1223508537650)
  CHECK(cell_average_log({0.0, 0.0}, 1.0) == doctest::Approx(-1.0611754268825245).epsilon(1e-12));
  // far from the source the average approaches the point value
  CHECK(cell_average_K0({2.0, 1.0}, 0.01) == doctest::Approx(bs::K0(std::sqrt(5.0))).epsilon(1e-6));
  // scaling: mean of log over a cell of side h is log h + mean over the unit cell
  CHECK(cell_average_log({0.0, 0.0}, 0.01) == doctest::Approx(std::log(0.01) - 1.0611754268825245).epsilon(1e-12));
}

TEST_CASE("w1 for one vortex at the disk center") {
  auto& ws = disk(128);
  const ScalarField w = solve_w1(ws, kCenter);
  // 2πG at |x| = 0.5
  CHECK(std::abs(interpolate(w, {0.5, 0.0}) - 2 * kPi * 0.0908396767928717) <= 2e-3);
  CHECK(std::abs(interpolate(w, {0.0, -0.5}) - 2 * kPi * 0.0908396767928717) <= 2e-3);
  const Grid& g = *ws.grid();
  for (int k : g.interior_nodes()) CHECK(w[k] >= 0.0);
  CHECK(std::abs(interpolate(w, {0.999, 0.0})) <= 1e-2);
  CHECK(std::abs(w1_total_mass(ws, w) - 2 * kPi) <= 0.02 * 2 * kPi);
  const ScalarField w3 = solve_w1(ws, kTriple);
  CHECK(std::abs(w1_total_mass(ws, w3) - 6 * kPi) <= 0.02 * 6 * kPi);
}

TEST_CASE("B1 for one vortex at the disk center") {
  auto& ws = disk(128);
  const auto b = coupling_bundle(ws, kCenter, 10.0);
  // R(0,0) − S(0,0) = −s(0)
  CHECK(std::abs(interpolate(b.B1, {0.0, 0.0}) - 0.2166139273862) <= 2e-3);
  CHECK(std::abs(interpolate(b.B1, {0.0, 0.9995})) <= 1e-3);
  // second boundary condition: −ΔB₁ = w₁ vanishes at the boundary
  CHECK(std::abs(interpolate(b.w1, {-0.9995, 0.0})) <= 1e-2);
  // scaled residual of −ΔB₁ = w₁
  const ScalarField r = ws.laplace().apply(b.B1) - b.w1;
  CHECK(r.max_abs_interior() / (1.0 + b.w1.max_abs_interior()) <= 1e-6);
}

TEST_CASE("minimal Phi value") {
  auto& ws = disk(128);
  const auto b = coupling_bundle(ws, kCenter, 10.0);
  CHECK(std::abs(b.min_phi_value - 126.352811221035) <= 0.05);
  CHECK(min_phi_value(ws, {}, 10.0, b.B1) == doctest::Approx(100.0 * ws.F_xi0()).epsilon(1e-14));
  const auto b3 = coupling_bundle(ws, kTriple, 7.0);
  CHECK(b3.min_phi_value <= 49.0 * ws.F_xi0());
}

TEST_CASE("B1 as a sum of R - S") {
  const double r64 = check_B1_identity(disk(64), kCenter), r128 = check_B1_identity(disk(128), kCenter);
  MESSAGE("B1 identity residual 64: " << r64 << " 128: " << r128);
  CHECK(r128 <= 1e-2);
  CHECK(r64 / r128 >= 3.0);
  const double t64 = check_B1_identity(disk(64), kTriple), t128 = check_B1_identity(disk(128), kTriple);
  MESSAGE("three vortices 64: " << t64 << " 128: " << t128);
  CHECK(t128 <= 2e-2);
  CHECK(t64 / t128 >= 3.0);
}

TEST_CASE("H, W, F and the minimal Phi value") {
  auto& ws = disk(128);
  std::vector<double> res;
  for (double hex : {5.0, 10.0, 20.0}) {
    const auto r = check_WH_identity(ws, kCenter, hex);
    CHECK(r.scaled <= 1e-2);
    CHECK(std::abs(r.reduction - r.absolute) <= 1e-10);
    res.push_back(r.absolute);
  }
  for (double v : res) CHECK(std::abs(v - res[0]) <= 0.2 * res[0] + 1e-12);
  const auto pair = check_WH_identity(ws, {{{0.4, 0.0}, {-0.4, 0.0}}}, 10.0);
  CHECK(pair.scaled <= 1e-2);
  CHECK(std::abs(pair.reduction - pair.absolute) <= 1e-10);
  const auto c64 = check_WH_identity(disk(64), kTriple, 10.0), c128 = check_WH_identity(disk(128), kTriple, 10.0);
  MESSAGE("WH three vortices 64: " << c64.absolute << " 128: " << c128.absolute);
  CHECK(c128.scaled <= 1e-2);
}

TEST_CASE("beta consistency") {
  auto& ws = disk(64);
  const auto b = coupling_bundle(ws, kTriple, 10.0);
  CHECK(beta_consistency(ws, b) <= 1e-8);
  const Grid& g = *ws.grid();
  for (int k : g.interior_nodes()) CHECK(b.beta[k] == doctest::Approx(b.B1[k] - 10.0 * ws.xi0()[k]));
}
