#include <doctest.h>

#include <cmath>

#include "cmorrey/conditions.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {
const DomainSpec disc = DomainSpec::ball(2, Point{}, 1.0, Point{});
const ExponentField p2 = ExponentField::constant(2.0);
}  // namespace

TEST_CASE("weight functions") {
  auto w = WeightFunction::power_log(0.5, -1.0, 4.0, 3.0);
  CHECK(w(0.5) == Approx(3.0 * std::sqrt(0.5) / std::log(8.0)));
  CHECK(w.log_value(std::log(0.5)) == Approx(std::log(w(0.5))));
  CHECK(w.scaled(2.0)(0.5) == Approx(2.0 * w(0.5)));
  CHECK(w.times_power(0.5)(0.5) == Approx(std::sqrt(0.5) * w(0.5)));
  CHECK_THROWS(WeightFunction::power_log(0.5, 1.0, 1.5).validate(2.0));  // A must exceed ell
  CHECK_NOTHROW(WeightFunction::power(0.5).validate(2.0));
}

TEST_CASE("dini integrals") {
  // int_0^1 ln^-2(4/r) dr/r = 1/ln 4
  auto w = WeightFunction::power_log(0.0, -2.0, 4.0);
  auto c = dini_integral(w, 1.0);
  auto q = dini_integral(w, 1.0, true);
  CHECK(c.method == VerdictMethod::closed_form);
  CHECK(q.method == VerdictMethod::quadrature);
  CHECK(c.value == Approx(0.721347520444481703679962340501).epsilon(1e-13));
  CHECK(q.value == Approx(0.721347520444481703679962340501).epsilon(1e-10));
  // int_0^1 r^{1/2} ln ln(B/r) dr/r, B = 2 e^{1+e} (mpmath reference)
  auto ll = dini_integral(WeightFunction::power_loglog(0.5, 2.0 * std::exp(1.0 + std::exp(1.0))), 1.0);
  CHECK(ll.value == Approx(3.63834238537193808197901456752).epsilon(1e-10));
  CHECK(std::isinf(dini_integral(WeightFunction::power(0.0), 1.0).value));
  CHECK(std::isinf(dini_integral(WeightFunction::power_log(0.0, -1.0, 4.0), 1.0).value));
  CHECK(check_dini(WeightFunction::power(0.3), 2.0).holds);
  CHECK_FALSE(check_dini(WeightFunction::power_log(0.0, -1.0, 4.0), 2.0).holds);
}

TEST_CASE("zygmund pair constants") {
  auto r12 = WeightFunction::power(0.5);
  auto v = check_zygmund_pair(r12, r12, 0.0, 2.0);
  CHECK(v.holds);
  CHECK(v.best_constant == Approx(2.0).epsilon(1e-12));
  // int_0^t r^s dr/r / t^s = 1/s
  CHECK(check_zygmund_pair(WeightFunction::power(0.25), WeightFunction::power(0.25), 0.0, 2.0).best_constant ==
        Approx(4.0).epsilon(1e-9));
  // with t^alpha the sup moves to t = ell: 4 sqrt(2)
  CHECK(check_zygmund_pair(WeightFunction::power(0.25), WeightFunction::power(0.25), 0.5, 2.0).best_constant ==
        Approx(4.0 * std::sqrt(2.0)).epsilon(1e-12));
  // ln^-2: the Dini integral 1/ln(A/t) outgrows omega2 = ln^-2(A/t)
  auto lg = WeightFunction::power_log(0.0, -2.0, 4.0);
  CHECK_FALSE(check_zygmund_pair(lg, lg, 0.0, 2.0).holds);
  // Scaling: C(c omega1, omega2) = c C(omega1, omega2)
  auto w1 = WeightFunction::power_log(0.5, 1.0, 4.0);
  auto w2 = WeightFunction::power_log(0.5, 1.0, 4.0, 0.7);
  const double base = check_zygmund_pair(w1, w2, 0.0, 2.0).best_constant;
  REQUIRE(std::isfinite(base));
  CHECK(check_zygmund_pair(w1.scaled(3.0), w2, 0.0, 2.0).best_constant == Approx(3.0 * base).epsilon(1e-12));
  CHECK(check_zygmund_pair(w1, w2.scaled(3.0), 0.0, 2.0).best_constant == Approx(base / 3.0).epsilon(1e-12));
  // Closed form and quadrature agree.
  for (double m : {-2.0, -0.5, 0.5, 1.0, 2.5}) {
    auto w = WeightFunction::power_log(0.5, m, 4.0);
    auto a = check_zygmund_pair(w, w, 0.0, 2.0);
    auto b = check_zygmund_pair(w, w, 0.0, 2.0, true);
    CHECK(a.method == VerdictMethod::closed_form);
    CHECK(b.best_constant == Approx(a.best_constant).epsilon(1e-6));
    CHECK(a.holds == b.holds);
  }
}

TEST_CASE("non-triviality and degeneracy") {
  // n/p'(x0) = 1 for n = 2, p = 2
  CHECK(check_nontriviality(WeightFunction::power(0.5), p2, disc).holds);
  CHECK(check_nontriviality(WeightFunction::power(1.0), p2, disc).holds);
  CHECK_FALSE(check_nontriviality(WeightFunction::power(2.0), p2, disc).holds);
  CHECK_FALSE(check_nontriviality(WeightFunction::power_log(1.0, -1.0, 4.0), p2, disc).holds);
  CHECK(check_degeneracy(WeightFunction::power(0.5), p2, disc).holds);
  CHECK_FALSE(check_degeneracy(WeightFunction::power(1.0), p2, disc).holds);
  // r / (r ln(A/r)) -> 0 only logarithmically.
  CHECK(check_degeneracy(WeightFunction::power_log(1.0, 1.0, 4.0), p2, disc).holds);
}

TEST_CASE("weighted embedding condition") {
  // rho omega^p / r^{n(p-1)} = 1 for rho = r^{lambda(p-1)}, omega = r^{(n-lambda)/p'}
  auto omega = WeightFunction::power(0.5);
  CHECK(check_weighted_embedding_condition(WeightFunction::power(1.0), omega, 2.0, 2, 2.0).holds);
  CHECK_FALSE(check_weighted_embedding_condition(WeightFunction::power(1.1), omega, 2.0, 2, 2.0).holds);
}

TEST_CASE("verdict csv") {
  auto v = check_dini(WeightFunction::power(0.3), 2.0);
  auto h = verdict_csv_header();
  auto r = to_csv(v);
  CHECK(std::count(h.begin(), h.end(), ',') == std::count(r.begin(), r.end(), ','));
}
