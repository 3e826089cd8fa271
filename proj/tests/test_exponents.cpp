#include <doctest.h>

#include <cmath>

#include "cmorrey/exponents.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {
const DomainSpec disc = DomainSpec::ball(2, Point{}, 1.0, Point{});
}

TEST_CASE("closed-form exponents and their bounds") {
  auto a = ExponentField::radial_affine(Point{}, 1.5, 0.5);
  CHECK(a(Point{0.5, 0.0, 0.0}) == Approx(1.75));
  auto [lo, hi] = a.bounds(disc);
  CHECK(lo == Approx(1.5));
  CHECK(hi == Approx(2.0));

  // 2 + 1/ln(C/r) takes values in (2, 2 + 1/ln C] on the unit disc
  const double C = std::exp(2.0) * 2.0;
  auto l = ExponentField::radial_log(Point{}, 2.0, 1.0, C);
  CHECK(l(Point{0.0, 1.0, 0.0}) == Approx(2.0 + 1.0 / std::log(C)));
  CHECK(l.radial(std::log(0.25)) == Approx(2.0 + 1.0 / std::log(4.0 * C)));
  auto [llo, lhi] = l.bounds(disc);
  CHECK(llo == Approx(2.0));
  CHECK(lhi == Approx(2.0 + 1.0 / std::log(C)));
  CHECK(l.radial_about(Point{}));
  CHECK_FALSE(l.radial_about(Point{0.1, 0.0, 0.0}));
  CHECK(ExponentField::constant(3.0).is_constant());
  CHECK_FALSE(l.is_constant());
}

TEST_CASE("conjugate and sobolev exponents") {
  CHECK(conjugate(ExponentField::constant(2.0), disc)(Point{}) == Approx(2.0));
  CHECK(conjugate(ExponentField::constant(1.5), disc)(Point{}) == Approx(3.0));
  // 1/q = 1/p - alpha/n
  auto q = sobolev_exponent(ExponentField::constant(1.5), ExponentField::constant(0.5), disc);
  CHECK(q(Point{0.2, 0.1, 0.0}) == Approx(2.4));
  auto ball3 = DomainSpec::ball(3, Point{}, 1.0, Point{});
  CHECK(sobolev_exponent(ExponentField::constant(2.0), ExponentField::constant(1.0), ball3)(Point{}) == Approx(6.0));
  // alpha p = n is excluded
  CHECK_THROWS_AS(sobolev_exponent(ExponentField::constant(2.0), ExponentField::constant(1.0), disc), ExponentError);
  CHECK_THROWS_AS(conjugate(ExponentField::constant(1.0), disc), ExponentError);
}

TEST_CASE("hypothesis validation") {
  CHECK_NOTHROW(validate_lebesgue_exponent(ExponentField::constant(1.2), disc));
  CHECK_THROWS_AS(validate_lebesgue_exponent(ExponentField::constant(1.0), disc), ExponentError);
  CHECK_NOTHROW(validate_lebesgue_exponent(ExponentField::constant(1.0), disc, true));
  CHECK_THROWS_AS(validate_lebesgue_exponent(ExponentField::radial_affine(Point{}, 1.0, 1.0), disc, true),
                  ExponentError);
  CHECK_NOTHROW(validate_order(ExponentField::constant(0.5), disc));
  CHECK_THROWS_AS(validate_order(ExponentField::constant(0.0), disc), ExponentError);
  CHECK_THROWS_AS(validate_order(ExponentField::constant(2.0), disc), ExponentError);
}

TEST_CASE("log-holder certificates") {
  auto c = check_log_holder(ExponentField::constant(2.0), disc, 1024);
  CHECK(c.A == 0.0);
  CHECK(c.stable);

  // |p(x) - p(y)| ln(1/|x-y|) stays bounded for 2 + 1/ln(C/r).
  auto l = check_log_holder(ExponentField::radial_log(Point{}, 2.0, 1.0, 2.0 * std::exp(2.0)), disc, 4096);
  CHECK(l.stable);
  CHECK(l.A > 0.0);
  CHECK(l.A < 2.0);
  CHECK(l.verified_pairs > 4096);

  // Nearly a jump across a hyperplane: the constant is large (about 0.4/(e gamma)).
  auto j = check_log_holder(ExponentField::power_jump(Point{}, 2.0, 0.2, 1e-3), disc, 4096);
  CHECK((!j.stable || j.A > 5.0));

  // Same seed, same certificate.
  auto l2 = check_log_holder(ExponentField::radial_log(Point{}, 2.0, 1.0, 2.0 * std::exp(2.0)), disc, 4096);
  CHECK(l2.A == l.A);
}
