#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cmorrey/norms.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {

const double pi = std::numbers::pi;
const DomainSpec disc = DomainSpec::ball(2, Point{}, 1.0, Point{});
const ExponentField p2 = ExponentField::constant(2.0);

QuadratureGrid grid(int depth = 24, const DomainSpec& d = disc) {
  GridOptions o;
  o.depth = depth;
  return QuadratureGrid(d, o);
}

}  // namespace

TEST_CASE("constant-exponent luxemburg norms match the L2 closed forms") {
  CHECK(luxemburg_norm(ScalarField::constant(1.0), p2, disc).value == Approx(std::sqrt(pi)).epsilon(1e-12));
  CHECK(luxemburg_norm(ScalarField::power(Point{}, 1.0), p2, disc).value == Approx(std::sqrt(pi / 2.0)).epsilon(1e-12));
  CHECK(luxemburg_norm(ScalarField::power(Point{}, -0.5), p2, disc).value == Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
  // The bisection path agrees with the closed-form shortcut.
  CHECK(luxemburg_norm_bisection(ScalarField::power(Point{}, -0.5), p2, disc).value ==
        Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
  // Annulus restriction: int_{1/2<|x|<1} 1 = 3 pi / 4
  CHECK(luxemburg_norm(ScalarField::constant(1.0), p2, disc, 0.5, 1.0).value ==
        Approx(std::sqrt(0.75 * pi)).epsilon(1e-12));
}

TEST_CASE("variable-exponent luxemburg norms") {
  // p(x) = 1.5 + 0.5|x|; reference values from an independent 1D root solve of
  // 2 pi int_0^1 (f(r)/eta)^{p(r)} r dr = 1.
  auto p = ExponentField::radial_affine(Point{}, 1.5, 0.5);
  CHECK(luxemburg_norm(ScalarField::constant(1.0), p, disc).value == Approx(1.8699323368262013).epsilon(1e-9));
  CHECK(luxemburg_norm(ScalarField::power(Point{}, 1.0), p, disc).value == Approx(1.302534821888108).epsilon(1e-9));
  CHECK(modular(ScalarField::constant(1.0), p, disc).value == Approx(pi).epsilon(1e-12));
}

TEST_CASE("luxemburg norm is a norm") {
  auto p = ExponentField::radial_cos(Point{0.1, 0.0, 0.0}, 2.0, 0.4, 5.0);
  GridOptions o;
  o.depth = 10;
  o.angular = 32;
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 4; ++trial) {
    auto f = ScalarField::random_smooth(Point{0.2, 0.1, 0.0}, 2, 2.0, -0.4, 100 + trial) + ScalarField::coordinate(1);
    auto g = ScalarField::random_smooth(Point{-0.3, 0.0, 0.0}, 2, 2.0, 0.5, 200 + trial);
    const double c = u(gen);
    const double nf = luxemburg_norm(f, p, disc, 0.0, INFINITY, o).value;
    const double ng = luxemburg_norm(g, p, disc, 0.0, INFINITY, o).value;
    CHECK(luxemburg_norm(c * f, p, disc, 0.0, INFINITY, o).value == Approx(std::abs(c) * nf).epsilon(1e-11));
    CHECK(luxemburg_norm(f + g, p, disc, 0.0, INFINITY, o).value <= (nf + ng) * (1.0 + 1e-12));
  }
}

TEST_CASE("exterior norms") {
  const auto g = grid(16);
  const auto radii = g.ladder().radii();
  SUBCASE("closed form for |x|^-2 with p = 2") {
    auto e = exterior_norms(ScalarField::power(Point{}, -2.0), p2, g);
    REQUIRE(e.size() == radii.size());
    for (std::size_t k = 2; k < radii.size(); ++k)
      CHECK(e[k] == Approx(std::sqrt(pi * (std::pow(radii[k], -2.0) - 1.0))).epsilon(1e-11));
    CHECK(e[0] == 0.0);
  }
  SUBCASE("monotone in the exterior") {
    auto p = ExponentField::radial_log(Point{}, 2.0, 1.0, 2.0 * std::exp(2.0));
    for (const auto& f : {ScalarField::power(Point{}, -1.0), ScalarField::oscillating_power(Point{}, 0.3, 9.0),
                          ScalarField::random_smooth(Point{}, 2, 2.0, -0.3, 4)}) {
      auto e = exterior_norms(f, p, g);
      for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] >= e[k - 1] * (1.0 - 1e-13));
    }
  }
}

TEST_CASE("complementary norm values") {
  const auto g = grid();
  const auto omega = WeightFunction::power(0.5);  // r^{(n - lambda)/p'} with n = 2, lambda = 1, p = 2
  SUBCASE("critical power converges to sqrt(2 pi)") {
    // r^{1/2} ||x|^{-3/2}|_{L^2(disc \ B_r)} = sqrt(2 pi (1 - r))
    auto r = complementary_morrey_norm(ScalarField::power(Point{}, -1.5), p2, omega, g);
    CHECK_FALSE(r.divergent);
    CHECK(r.value == Approx(std::sqrt(2.0 * pi)).epsilon(1e-7));
  }
  SUBCASE("constant field: sup over the ladder at r = 1/2") {
    // r^{1/2} sqrt(pi (1 - r^2)) on r = 2^-k
    auto r = complementary_morrey_norm(ScalarField::constant(1.0), p2, omega, g);
    CHECK(r.value == Approx(std::sqrt(3.0 * pi / 8.0)).epsilon(1e-12));
    CHECK(*r.argmax_radius == 0.5);
  }
  SUBCASE("log-log growth is divergent") {
    auto r = complementary_morrey_norm(ScalarField::power_loglog(Point{}, -1.5, std::exp(1.0 + std::exp(1.0)) * 2.0),
                                       p2, omega, g);
    CHECK(r.divergent);
    CHECK(std::isinf(r.value));
  }
  SUBCASE("homogeneity and sampled fields") {
    auto f = ScalarField::random_smooth(Point{}, 2, 2.0, -0.7, 9);
    auto a = complementary_morrey_norm(f, p2, omega, g);
    auto b = complementary_morrey_norm(f.scaled(-3.0), p2, omega, g);
    CHECK(b.value == Approx(3.0 * a.value).epsilon(1e-12));
    std::vector<double> vals(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) vals[i] = f(g.nodes()[i]);
    auto s = complementary_morrey_norm(vals, p2, omega, g);
    CHECK(s.value == Approx(a.value).epsilon(1e-12));
  }
}

TEST_CASE("weighted, log-damped and weak norms") {
  const auto g = grid();
  const auto mu = WeightedMeasure::power(1.0);
  const auto f = ScalarField::power(Point{}, -1.5);
  // int_disc |x| dx = 2 pi / 3
  CHECK(weighted_lebesgue_norm(ScalarField::constant(1.0), 2.0, mu, g).value ==
        Approx(std::sqrt(2.0 * pi / 3.0)).epsilon(1e-12));
  auto w = weighted_lebesgue_norm(f, 2.0, mu, g);
  CHECK(w.divergent);
  // 2 pi int_0^1 r^{-1} ln^{-1-eps}(4/r) dr = 2 pi (ln 4)^{-eps} / eps
  for (double eps : {0.1, 0.5, 1.0}) {
    auto d = weighted_lebesgue_norm(f, 2.0, WeightedMeasure::log_damped(1.0, eps, 4.0), g);
    CHECK_FALSE(d.divergent);
    CHECK(d.value == Approx(std::sqrt(2.0 * pi * std::pow(std::log(4.0), -eps) / eps)).epsilon(1e-5));
  }
  // mu{|x|^{-3/2} > t} = (2 pi / 3) t^{-2} for t >= 1, so the weak norm is sqrt(2 pi / 3).
  CHECK(weak_weighted_norm(f, 2.0, mu, g).value == Approx(std::sqrt(2.0 * pi / 3.0)).epsilon(1e-9));
  CHECK(weak_weighted_norm(ScalarField::constant(1.0), 2.0, mu, g).value ==
        Approx(std::sqrt(2.0 * pi / 3.0)).epsilon(1e-9));
  // mu{|x|^{-0.8} > t} is the whole disc for t <= 1, so the sup sits at t = 1.
  CHECK(weak_weighted_norm(ScalarField::power(Point{}, -0.8), 2.0, mu, g).value ==
        Approx(std::sqrt(2.0 * pi / 3.0)).epsilon(1e-12));
  // For |x| on the unit disc: max over t of t sqrt(2 pi (1 - t^3) / 3) at t^3 = 2/5.
  CHECK(weak_weighted_norm(ScalarField::power(Point{}, 1.0), 2.0, mu, g).value ==
        Approx(std::cbrt(0.4) * std::sqrt(2.0 * pi * 0.6 / 3.0)).epsilon(1e-12));
  // Weak norm never exceeds the strong one.
  auto h = ScalarField::power(Point{}, -0.8);
  CHECK(weak_weighted_norm(h, 2.0, mu, g).value <= weighted_lebesgue_norm(h, 2.0, mu, g).value * (1.0 + 1e-12));
  // Threshold grid gives a lower bound of the exact supremum.
  std::vector<double> t;
  for (int j = -8; j <= 40; ++j) t.push_back(std::exp2(j / 4.0));
  CHECK(weak_weighted_norm(h, 2.0, mu, g, t).value <= weak_weighted_norm(h, 2.0, mu, g).value * (1.0 + 1e-12));
}

TEST_CASE("classical morrey norm") {
  // sup_r r^{-1/2} ||1||_{L^2(B(0,r) cap disc)} = sqrt(pi), attained at r = 1
  auto r = classical_morrey_norm(ScalarField::constant(1.0), p2, ExponentField::constant(1.0), grid(16));
  CHECK(r.value == Approx(std::sqrt(pi)).epsilon(1e-12));
  // lambda = 0 is the L2 norm
  auto l = classical_morrey_norm(ScalarField::power(Point{}, 1.0), p2, ExponentField::constant(0.0), grid(16));
  CHECK(l.value == Approx(std::sqrt(pi / 2.0)).epsilon(1e-12));
}

TEST_CASE("csv rows") {
  auto r = luxemburg_norm(ScalarField::constant(1.0), p2, disc);
  auto header = norm_csv_header();
  auto row = to_csv(r);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}
