#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "glvortex/errors.hpp"
#include "glvortex/geometry.hpp"

using namespace glvortex;

TEST_CASE("build_grid area consistency on the unit disk") {
  const auto g = build_grid(DomainSpec::disk(), 128);
  CHECK(std::abs(g->weight_sum() - std::numbers::pi) < 0.01 * std::numbers::pi);
}

TEST_CASE("area error does not grow under refinement") {
  const auto g64 = build_grid(DomainSpec::disk(), 64);
  const auto g128 = build_grid(DomainSpec::disk(), 128);
  const double e64 = std::abs(g64->weight_sum() - std::numbers::pi);
  const double e128 = std::abs(g128->weight_sum() - std::numbers::pi);
  // Cell areas are exact, so both errors sit at rounding level.
  CHECK(e128 <= std::max(e64 / 3.0, 1e-11));
}

TEST_CASE("ellipse area") {
  const auto g = build_grid(DomainSpec::ellipse(1.0, 0.5), 128);
  CHECK(std::abs(g->weight_sum() - std::numbers::pi / 2) < 0.01 * std::numbers::pi / 2);
}

TEST_CASE("coarse resolution is rejected") {
  CHECK_THROWS_AS(build_grid(DomainSpec::disk(), 15), ConfigError);
  CHECK_THROWS_AS(DomainSpec::ellipse(-1.0, 0.5), ConfigError);
}

TEST_CASE("signed distance examples") {
  const auto disk = DomainSpec::disk();
  CHECK(signed_distance(disk, {0, 0}) == doctest::Approx(1.0));
  CHECK(signed_distance(disk, {0.75, 0}) == doctest::Approx(0.25));
  CHECK(signed_distance(disk, {2.0, 0}) == doctest::Approx(-1.0));
  const auto ell = DomainSpec::ellipse(1.0, 0.5);
  CHECK(signed_distance(ell, {0, 0}) == doctest::Approx(0.5));
  CHECK(signed_distance(ell, {0.9, 0}) == doctest::Approx(0.1));
  CHECK(signed_distance(ell, {0, 0.7}) == doctest::Approx(-0.2));
}

TEST_CASE("disk distance is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const auto disk = DomainSpec::disk();
  for (int t = 0; t < 200; ++t) {
    const Vec2 p(u(rng), u(rng));
    const double exact = 1.0 - p.norm();
    CHECK(std::abs(signed_distance(disk, p) - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("distance is 1-Lipschitz and the projection lands on the boundary") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  const auto ell = DomainSpec::ellipse(1.0, 0.5);
  for (int t = 0; t < 500; ++t) {
    const Vec2 p(u(rng), u(rng)), q(u(rng), u(rng));
    CHECK(std::abs(signed_distance(ell, p) - signed_distance(ell, q)) <= (p - q).norm() + 1e-12);
    const DistanceInfo di = distance_info(ell, p);
    CHECK(std::abs(ell.level(di.nearest) - 1.0) < 1e-10);
    CHECK(std::abs(std::abs(di.d) - (p - di.nearest).norm()) < 1e-12);
    CHECK(std::abs(di.gradient.norm() - 1.0) < 1e-9);
  }
  // brute force comparison against a dense boundary sample
  for (int t = 0; t < 50; ++t) {
    const Vec2 p(u(rng), u(rng));
    double best = 1e9;
    for (int s = 0; s < 200000; ++s) {
      const double th = 2 * std::numbers::pi * s / 200000.0;
      best = std::min(best, (p - Vec2(std::cos(th), 0.5 * std::sin(th))).norm());
    }
    CHECK(std::abs(std::abs(signed_distance(ell, p)) - best) < 1e-8);
  }
}

TEST_CASE("interior mask is monotone under refinement") {
  for (auto spec : {DomainSpec::disk(), DomainSpec::ellipse(1.0, 0.5)}) {
    const auto c = build_grid(spec, 32), f = build_grid(spec, 64);
    for (int k = 0; k < c->node_count(); ++k) {
      if (!c->interior(k)) continue;
      const Vec2 p = c->point(k);
      const int i = static_cast<int>(std::lround((p.x() - f->x0()) / f->h()));
      const int j = static_cast<int>(std::lround((p.y() - f->y0()) / f->h()));
      CHECK(f->interior(f->index(i, j)));
    }
  }
}

TEST_CASE("cut records") {
  const auto g = build_grid(DomainSpec::ellipse(1.0, 0.5), 40);
  int boundary_nodes = 0;
  for (int k : g->interior_nodes()) {
    CHECK(g->distance(k) > 0.0);
    const int i = g->ix(k), j = g->iy(k);
    bool has_outside = false;
    for (int dir = 0; dir < 4; ++dir) {
      const bool out = !g->interior(g->index(i + kDirX[dir], j + kDirY[dir]));
      has_outside |= out;
      const int c = g->cut_of(k, dir);
      CHECK((c >= 0) == out);
      if (c >= 0) {
        const Cut& cut = g->cuts()[c];
        CHECK(cut.theta > 0.0);
        CHECK(cut.theta <= 1.0);
        CHECK(std::abs(g->spec().level(cut.point) - 1.0) < 1e-9);
      }
    }
    boundary_nodes += has_outside;
    CHECK(g->near_boundary(k) == has_outside);
  }
  CHECK(boundary_nodes > 0);
}

TEST_CASE("clipped area of a full box and of a half") {
  const auto disk = DomainSpec::disk();
  CHECK(clipped_area(disk, -2, 2, -2, 2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  CHECK(clipped_area(disk, -2, 2, 0, 2) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
  CHECK(clipped_area(disk, 0, 2, 0, 2) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-14));
  CHECK(clipped_area(disk, 0.1, 0.2, 0.1, 0.2) == doctest::Approx(0.01));
  // circular segment x > 0.5
  const double seg = std::acos(0.5) - 0.5 * std::sqrt(0.75);
  CHECK(clipped_area(disk, 0.5, 2, -2, 2) == doctest::Approx(seg).epsilon(1e-12));
}
