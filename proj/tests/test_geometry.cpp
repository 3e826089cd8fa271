#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmorrey/fields.hpp"
#include "cmorrey/geometry.hpp"
#include "cmorrey/quadrature.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {

double sum(const std::vector<double>& v, std::size_t b, std::size_t e) {
  double s = 0.0;
  for (std::size_t i = b; i < e; ++i) s += v[i];
  return s;
}

}  // namespace

TEST_CASE("domain specs") {
  auto disc = DomainSpec::ball(2, Point{}, 1.0, Point{});
  CHECK(disc.ell == 2.0);
  CHECK(disc.volume() == Approx(std::numbers::pi));
  CHECK(disc.delta() == Approx(1.0));
  CHECK(disc.contains(Point{0.5, 0.5, 0.0}));
  CHECK_FALSE(disc.contains(Point{0.8, 0.8, 0.0}));
  CHECK(disc.exit_distance(Point{}, Point{1.0, 0.0, 0.0}) == Approx(1.0));
  CHECK(disc.exit_distance(Point{0.5, 0.0, 0.0}, Point{-1.0, 0.0, 0.0}) == Approx(1.5));

  auto box = DomainSpec::box(2, Point{-1.0, -1.0, 0.0}, Point{1.0, 2.0, 0.0}, Point{0.25, 0.0, 0.0});
  CHECK(box.volume() == Approx(6.0));
  CHECK(box.delta() == Approx(0.75));
  CHECK(box.exit_distance(Point{0.25, 0.0, 0.0}, Point{0.0, 1.0, 0.0}) == Approx(2.0));

  auto ball3 = DomainSpec::ball(3, Point{}, 2.0, Point{0.5, 0.0, 0.0});
  CHECK(ball3.volume() == Approx(32.0 * std::numbers::pi / 3.0));

  CHECK_THROWS_AS(DomainSpec::ball(2, Point{}, 1.0, Point{1.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(DomainSpec::ball(2, Point{}, -1.0, Point{}), DomainError);
  CHECK_THROWS_AS(DomainSpec::ball(4, Point{}, 1.0, Point{}), DomainError);
}

TEST_CASE("sphere rules are antipodal and integrate the sphere") {
  for (int n : {2, 3}) {
    auto rays = sphere_rays(n, 16, Point{0.0, 0.0, 1.0});
    double w = 0.0;
    for (const auto& r : rays) w += r.weight;
    CHECK(w == Approx(sphere_surface_measure(n)).epsilon(1e-13));
    for (const auto& r : rays) {
      bool found = false;
      for (const auto& s : rays) found = found || distance(r.dir, -1.0 * s.dir) < 1e-14;
      CHECK(found);
    }
  }
}

TEST_CASE("grid weights reproduce the domain volume") {
  SUBCASE("disc centered at x0") {
    auto d = DomainSpec::ball(2, Point{}, 1.0, Point{});
    QuadratureGrid g(d, GridOptions{});
    REQUIRE(g.has_core());
    const double core = std::numbers::pi * g.r_min() * g.r_min();
    CHECK(sum(g.weights(), 0, g.size()) + core == Approx(std::numbers::pi).epsilon(1e-12));
  }
  SUBCASE("off-center x0 in a 3-ball") {
    auto d = DomainSpec::ball(3, Point{}, 1.0, Point{0.3, -0.2, 0.1});
    GridOptions o;
    o.angular = 32;
    o.depth = 16;
    QuadratureGrid g(d, o);
    const double core = 4.0 * std::numbers::pi / 3.0 * std::pow(g.r_min(), 3);
    CHECK(sum(g.weights(), 0, g.size()) + core == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-4));
  }
  SUBCASE("box with corners") {
    auto d = DomainSpec::box(2, Point{-1.0, -1.0, 0.0}, Point{1.0, 2.0, 0.0}, Point{0.25, 0.0, 0.0});
    QuadratureGrid g(d, GridOptions{});
    const double core = std::numbers::pi * g.r_min() * g.r_min();
    CHECK(sum(g.weights(), 0, g.size()) + core == Approx(6.0).epsilon(1e-10));
  }
}

TEST_CASE("exterior prefixes are the complements of ladder balls") {
  auto d = DomainSpec::ball(2, Point{}, 1.0, Point{});
  GridOptions o;
  o.depth = 12;
  QuadratureGrid g(d, o);
  const auto radii = g.ladder().radii();
  REQUIRE(radii.size() == 13);
  CHECK(radii[0] == 2.0);
  for (int k = 0; k <= 12; ++k) {
    const double r = std::min(1.0, radii[k]);
    CHECK(sum(g.weights(), 0, g.exterior_end(k)) == Approx(std::numbers::pi * (1.0 - r * r)).epsilon(1e-12));
  }
  // Nodes are ordered outside-in.
  for (std::size_t b = 1; b < g.bands(); ++b) CHECK(g.band_outer(b) <= g.band_inner(b - 1) * (1.0 + 1e-15));
}

TEST_CASE("truncated ball measure") {
  auto d = DomainSpec::ball(2, Point{}, 1.0, Point{});
  CHECK(truncated_ball_measure(d, Point{}, 0.5) == Approx(std::numbers::pi / 4.0));
  CHECK(truncated_ball_measure(d, Point{}, 3.0) == Approx(std::numbers::pi));
  // Lens of two unit discs at distance 1: 2 pi / 3 - sqrt(3) / 2.
  CHECK(truncated_ball_measure(d, Point{1.0 - 1e-15, 0.0, 0.0}, 1.0) ==
        Approx(2.0 * std::numbers::pi / 3.0 - std::sqrt(3.0) / 2.0).epsilon(1e-6));
}

TEST_CASE("annulus integrals") {
  auto d = DomainSpec::ball(2, Point{}, 1.0, Point{});
  Estimate e = integrate_annulus(d, ScalarField::constant(1.0), 0.25, 0.5);
  CHECK(e.value == Approx(std::numbers::pi * (0.25 - 0.0625)).epsilon(1e-12));
  // int_{B(0,1/2)} |y|^-1 dy = 2 pi * 1/2
  Estimate s = integrate_annulus(d, ScalarField::power(Point{}, -1.0), 0.0, 0.5);
  CHECK(s.value == Approx(std::numbers::pi).epsilon(1e-10));
}
