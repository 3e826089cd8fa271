#include <doctest.h>

#include <cmath>
#include <random>

#include "cmorrey/fields.hpp"

using namespace cmorrey;
using doctest::Approx;

TEST_CASE("closed-form values") {
  const Point x0{0.1, -0.2, 0.0};
  const Point y{0.4, 0.2, 0.0};  // |y - x0| = 0.5
  CHECK(ScalarField::constant(3.0)(y) == 3.0);
  CHECK(ScalarField::power(x0, -1.5)(y) == Approx(std::pow(0.5, -1.5)));
  CHECK(ScalarField::power_log(x0, -1.0, 2.0, 4.0)(y) == Approx(2.0 * std::pow(std::log(8.0), 2.0)));
  CHECK(ScalarField::power_loglog(x0, 0.5, 10.0)(y) == Approx(std::sqrt(0.5) * std::log(std::log(20.0))));
  CHECK(ScalarField::ball_indicator(x0, 0.6)(y) == 1.0);
  CHECK(ScalarField::ball_indicator(x0, 0.4)(y) == 0.0);
  CHECK(ScalarField::annulus_indicator(x0, 0.4, 0.6)(y) == 1.0);
  CHECK(ScalarField::annulus_indicator(x0, 0.1, 0.3)(y) == 0.0);
  CHECK(ScalarField::coordinate(1)(y) == 0.2);
  CHECK(ScalarField::oscillating_power(x0, -1.0, 3.0)(y) == Approx(2.0 * std::cos(1.5)));
  CHECK(ScalarField()(y) == 0.0);
}

TEST_CASE("algebra of fields") {
  const Point y{0.3, 0.4, 0.0};
  auto f = ScalarField::power(Point{}, 1.0);
  auto g = ScalarField::coordinate(0);
  CHECK((f + g)(y) == Approx(0.8));
  CHECK((2.5 * f)(y) == Approx(1.25));
  CHECK(ScalarField::coordinate(0).scaled(-2.0).absolute()(y) == Approx(0.6));
  CHECK((f + g).radial_about(Point{}) == false);
  CHECK((2.5 * f).radial_about(Point{}));
}

TEST_CASE("radial log form matches pointwise evaluation") {
  const Point x0{0.2, 0.1, -0.3};
  std::vector<ScalarField> fs = {
      ScalarField::constant(-2.0),
      ScalarField::power(x0, -1.5),
      ScalarField::power_log(x0, -1.0, -1.0, 4.0),
      ScalarField::power_loglog(x0, -1.0, 40.0),
      ScalarField::oscillating_power(x0, 0.5, 7.0).scaled(-3.0),
      ScalarField::ball_indicator(x0, 0.3),
  };
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& f : fs) {
    INFO(f.describe());
    REQUIRE(f.radial_about(x0));
    for (int i = 0; i < 50; ++i) {
      Point d{u(gen), u(gen), u(gen)};
      d = (1.0 / norm(d)) * d;
      double t = std::exp(-6.0 * (u(gen) + 1.0));
      Point y = along(x0, t, d);
      double v = f(y);
      LogValue lv = f.radial(std::log(t));
      if (v == 0.0) {
        CHECK(lv.sign == 0);
      } else {
        CHECK(lv.sign == (v > 0 ? 1 : -1));
        CHECK(lv.log_abs == Approx(std::log(std::abs(v))).epsilon(1e-12));
      }
    }
  }
  // Far below the double range the log form stays finite.
  CHECK(ScalarField::power(x0, -1.5).radial(-1e6).log_abs == Approx(1.5e6));
}

TEST_CASE("random smooth fields are seeded") {
  const Point x0{};
  auto a = ScalarField::random_smooth(x0, 2, 2.0, -0.5, 11);
  auto b = ScalarField::random_smooth(x0, 2, 2.0, -0.5, 11);
  auto c = ScalarField::random_smooth(x0, 2, 2.0, -0.5, 12);
  const Point y{0.3, -0.1, 0.0};
  CHECK(a(y) == b(y));
  CHECK(a(y) != c(y));
  // The modulation stays within 1 +- 0.6.
  const double base = std::pow(norm(y), -0.5);
  CHECK(a(y) >= 0.4 * base - 1e-12);
  CHECK(a(y) <= 1.6 * base + 1e-12);
  CHECK(a.singular_at(x0));
  CHECK_FALSE(ScalarField::constant(1.0).singular_at(x0));
}
