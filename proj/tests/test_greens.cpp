#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "glvortex/bessel.hpp"
#include "glvortex/errors.hpp"
#include "glvortex/greens.hpp"

using namespace glvortex;
namespace bs = glvortex::bessel;

namespace {

// S̃(x,y) on the unit disk from the Fourier-Bessel image series.
double stilde_series(const Vec2& x, const Vec2& y) {
  const double r = x.norm(), rho = y.norm();
  const double dphi = std::atan2(x.y(), x.x()) - std::atan2(y.y(), y.x());
  double s = 0.0;
  for (int n = 0; n < 40; ++n) {
    const double t = (n ? 2.0 : 1.0) * bs::Kn(n, 1.0) / bs::In(n, 1.0) * bs::In(n, r) * bs::In(n, rho) * std::cos(n * dphi);
    s -= t;
    if (n > 3 && std::abs(t) < 1e-16) break;
  }
  return s;
}

struct Disk128 {
  GridPtr g = build_grid(DomainSpec::disk(), 128);
  OperatorHandle helm{g, OperatorKind::helmholtz};
  OperatorHandle lap{g, OperatorKind::laplace};
};

Disk128& disk128() {
  static Disk128 d;
  return d;
}

}  // namespace

TEST_CASE("stilde at the disk center") {
  auto& D = disk128();
  const ScalarField st = stilde_field(D.helm, {0, 0});
  const double exact0 = -bs::K0(1.0) / bs::I0(1.0);
  CHECK(std::abs(interpolate(st, {0, 0}) - exact0) < 1e-4);
  double err = 0.0;
  for (int k : D.g->interior_nodes()) err = std::max(err, std::abs(st[k] - exact0 * bs::I0(D.g->point(k).norm())));
  CHECK(err < 1e-4);
  CHECK(st.max_interior() <= 0.0);
}

TEST_CASE("stilde off center matches the image series") {
  auto& D = disk128();
  const Vec2 y(0.35, -0.2);
  const ScalarField st = stilde_field(D.helm, y);
  for (Vec2 x : {Vec2(0.0, 0.0), Vec2(0.35, -0.2), Vec2(-0.6, 0.5), Vec2(0.8, 0.1)})
    CHECK(std::abs(interpolate(st, x) - stilde_series(x, y)) < 1e-3);
}

TEST_CASE("stilde bounds: nonpositive and above log d - C") {
  auto& D = disk128();
  double worst = -1e9;
  for (double r : {0.0, 0.5, 0.8, 0.9, 0.95, 0.98}) {
    const Vec2 y(r * std::cos(1.0), r * std::sin(1.0));
    const ScalarField st = stilde_field(D.helm, y);
    CHECK(st.max_interior() <= 1e-12);
    worst = std::max(worst, std::log(1.0 - r) - st.min_interior());
  }
  // fitted C(Ω) for the unit disk
  CHECK(worst < 1.0);
}

TEST_CASE("G at |x| = 0.5 from the center") {
  auto& D = disk128();
  const GreenBundle b = green_G(D.helm, {0, 0});
  const double exact = (bs::K0(0.5) - bs::K0(1.0) * bs::I0(0.5) / bs::I0(1.0)) / (2 * std::numbers::pi);
  CHECK(exact == doctest::Approx(0.0908396767928717).epsilon(1e-12));
  CHECK(std::abs(green_value(b, {0.5, 0.0}) - exact) < 5e-4);
  CHECK(std::abs(green_value(b, {0.0, -0.5}) - exact) < 5e-4);
  CHECK(std::abs(interpolate(b.G, {0.5, 0.0}) - exact) < 5e-4);
  CHECK(b.G.min_interior() >= -1e-8);
  // vanishing trace: nodes within one cell of the boundary
  for (const Cut& c : D.g->cuts()) CHECK(std::abs(b.G[c.node]) < 0.02);
  // the three fields are consistent
  for (int k : D.g->interior_nodes()) {
    const double r = D.g->point(k).norm();
    if (r < 1e-12) continue;
    REQUIRE(std::abs(2 * std::numbers::pi * b.G[k] + std::log(r) - b.S[k]) < 1e-9);
  }
}

TEST_CASE("G is symmetric") {
  auto& D = disk128();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> rad(0.0, 0.85), ang(0.0, 2 * std::numbers::pi);
  auto pick = [&] {
    const double r = rad(rng), t = ang(rng);
    return Vec2(r * std::cos(t), r * std::sin(t));
  };
  for (int t = 0; t < 10; ++t) {
    const Vec2 x = pick(), y = pick();
    const GreenBundle bx = green_G(D.helm, x), by = green_G(D.helm, y);
    CHECK(std::abs(green_value(by, x) - green_value(bx, y)) < 1e-3);
  }
}

TEST_CASE("sources outside the domain are rejected") {
  auto& D = disk128();
  CHECK_THROWS_AS(stilde_field(D.helm, {1.0, 0.0}), DomainError);
  bool warn = false;
  stilde_field(D.helm, {1.0 - 0.3 / 128, 0.0}, &warn);
  CHECK(warn);
}

TEST_CASE("s at the disk center") {
  auto& D = disk128();
  const double exact = bs::kL - bs::K0(1.0) / bs::I0(1.0);
  CHECK(std::abs(s_point(D.helm, {0, 0}) - exact) < 5e-3);
  const DiagLattice lat(D.helm);
  CHECK(std::abs(lat.s({0, 0}) - exact) < 5e-3);
  // radial symmetry of the interpolated diagonal
  for (double r : {0.3, 0.5, 0.7, 0.9}) {
    double lo = 1e9, hi = -1e9;
    for (int t = 0; t < 24; ++t) {
      const double v = lat.s({r * std::cos(0.27 * t), r * std::sin(0.27 * t)});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CAPTURE(r);
    CHECK(hi - lo <= 2e-3);
  }
  // lattice interpolant against direct point solves
  for (Vec2 p : {Vec2(0.21, 0.33), Vec2(-0.6, 0.1), Vec2(0.05, -0.93)})
    CHECK(std::abs(lat.s(p) - s_point(D.helm, p)) < 5e-3);
  // gradient against differences of the interpolant
  const Vec2 p(0.4, -0.3);
  const double e = 1e-5;
  const Vec2 fd((lat.s(p + Vec2(e, 0)) - lat.s(p - Vec2(e, 0))) / (2 * e),
                (lat.s(p + Vec2(0, e)) - lat.s(p - Vec2(0, e))) / (2 * e));
  CHECK((lat.grad_s(p) - fd).norm() < 1e-5);
}

TEST_CASE("diagonal estimates have stable constants") {
  const auto g64 = build_grid(DomainSpec::disk(), 64);
  OperatorHandle h64(g64, OperatorKind::helmholtz);
  auto& D = disk128();
  const DiagLattice l64(h64), l128(D.helm);
  const SEstimate e64 = s_estimates(l64, *D.g, 0.02), e128 = s_estimates(l128, *D.g, 0.02);
  CHECK(e128.c_value / e64.c_value <= 1.2);
  CHECK(e128.c_gradient / e64.c_gradient <= 1.2);
  CHECK(e128.c_value < 1.0);
  CHECK(e128.c_gradient < 2.0);
}

TEST_CASE("Laplace regular part") {
  auto& D = disk128();
  const ScalarField R0 = laplace_R_field(D.lap, {0, 0});
  CHECK(R0.max_abs_interior() < 1e-12);
  const Vec2 y(0.5, 0.0);
  const ScalarField R = laplace_R_field(D.lap, y);
  CHECK(std::abs(interpolate(R, y) - std::log(0.75)) < 1e-4);
  // exact image formula R(x,y) = log(|y| |x - y*|)
  const Vec2 ystar = y / y.squaredNorm();
  for (Vec2 x : {Vec2(0.1, 0.2), Vec2(-0.7, -0.3)})
    CHECK(std::abs(interpolate(R, x) - std::log(y.norm() * (x - ystar).norm())) < 1e-4);
  // harmonic: discrete residual of the defining problem
  const ScalarField res =
      D.lap.apply(R, boundary_values(*D.g, [&](const Vec2& x) { return std::log((x - y).norm()); }));
  CHECK(res.max_abs_interior() <= 1e-6 * (1.0 + R.max_abs_interior()) * D.lap.matrix().diagonal().maxCoeff());
}
