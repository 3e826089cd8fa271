#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cmorrey/point.hpp"
#include "cmorrey/quadrature.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {

double integrate(const std::vector<double>& x, const std::vector<double>& w, int power) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], power);
  return s;
}

double monomial_exact(int k) { return k % 2 == 1 ? 0.0 : 2.0 / (k + 1); }

}  // namespace

TEST_CASE("gauss-legendre rules are exact up to degree 2m-1") {
  for (int m : {1, 2, 5, 16, 24, 48}) {
    const GaussRule& g = gauss_legendre(m);
    REQUIRE(g.x.size() == static_cast<std::size_t>(m));
    for (int k = 0; k <= 2 * m - 1; ++k) CHECK(integrate(g.x, g.w, k) == Approx(monomial_exact(k)).epsilon(1e-13));
  }
  CHECK_THROWS(gauss_legendre(0));
  CHECK_THROWS(gauss_legendre(97));
}

TEST_CASE("kronrod rules: exactness and embedded gauss weights") {
  const KronrodRule& k15 = kronrod15();
  const KronrodRule& k7 = kronrod7();
  REQUIRE(k15.x.size() == 15);
  REQUIRE(k7.x.size() == 7);
  for (int k = 0; k <= 22; ++k) CHECK(integrate(k15.x, k15.w, k) == Approx(monomial_exact(k)).epsilon(1e-14));
  for (int k = 0; k <= 13; ++k) CHECK(integrate(k15.x, k15.w_gauss, k) == Approx(monomial_exact(k)).epsilon(1e-14));
  for (int k = 0; k <= 10; ++k) CHECK(integrate(k7.x, k7.w, k) == Approx(monomial_exact(k)).epsilon(1e-14));
  for (int k = 0; k <= 5; ++k) CHECK(integrate(k7.x, k7.w_gauss, k) == Approx(monomial_exact(k)).epsilon(1e-14));
  // Gauss weights sit on the even-indexed nodes only.
  for (std::size_t i = 0; i < k15.x.size(); ++i) CHECK((k15.w_gauss[i] == 0.0) == (i % 2 == 0));
}

TEST_CASE("pairwise sum agrees with a long double accumulation") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(100003);
  long double ref = 0.0L;
  for (double& x : v) {
    x = u(gen);
    ref += x;
  }
  CHECK(pairwise_sum(v) == Approx(static_cast<double>(ref)).epsilon(1e-13));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("sphere and ball measures") {
  CHECK(sphere_surface_measure(1) == Approx(2.0));
  CHECK(sphere_surface_measure(2) == Approx(2.0 * std::numbers::pi));
  CHECK(sphere_surface_measure(3) == Approx(4.0 * std::numbers::pi));
  CHECK(unit_ball_volume(2) == Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("log-radial integrals against closed forms") {
  SUBCASE("exponential decay to -inf") {
    auto r = integrate_log_radial([](double L) { return 2.0 * L; }, 0.0, -INFINITY);
    CHECK_FALSE(r.divergent);
    CHECK(r.value == Approx(0.5).epsilon(1e-13));
  }
  SUBCASE("finite range") {
    auto r = integrate_log_radial([](double L) { return L; }, 0.0, -10.0);
    CHECK(r.value == Approx(1.0 - std::exp(-10.0)).epsilon(1e-13));
  }
  SUBCASE("short range") {
    auto r = integrate_log_radial([](double L) { return L; }, 0.0, -0.5);
    CHECK(r.value == Approx(1.0 - std::exp(-0.5)).epsilon(1e-13));
  }
  SUBCASE("slow power-law tails") {
    // int_{-inf}^{Lt} (ln 4 - L)^{-1-eps} dL = (ln 4 - Lt)^{-eps} / eps
    const double Lt = std::log(std::ldexp(1.0, -23));
    for (double eps : {0.1, 0.5, 1.0, 2.0}) {
      auto r = integrate_log_radial([&](double L) { return -(1.0 + eps) * std::log(std::log(4.0) - L); }, Lt, -INFINITY);
      CHECK_FALSE(r.divergent);
      CHECK(r.value == Approx(std::pow(std::log(4.0) - Lt, -eps) / eps).epsilon(1e-5));
    }
  }
  SUBCASE("power tail with a log factor") {
    // int_1^inf u^{-2} ln u du = 1
    auto r = integrate_log_radial([](double L) { return -2.0 * std::log(1.0 - L) + std::log(std::log(1.0 - L)); }, 0.0,
                                  -INFINITY);
    CHECK_FALSE(r.divergent);
    CHECK(r.value == Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("divergent tails") {
    CHECK(integrate_log_radial([](double) { return 0.0; }, 0.0, -INFINITY).divergent);
    CHECK(integrate_log_radial([](double L) { return -std::log(1.0 - L); }, 0.0, -INFINITY).divergent);
    CHECK(integrate_log_radial([](double L) { return -0.5 * L; }, 0.0, -INFINITY).divergent);
  }
  SUBCASE("empty range") { CHECK(integrate_log_radial([](double) { return 0.0; }, 1.0, 1.0).value == 0.0); }
}
