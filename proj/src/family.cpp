#include <cmath>

#include "cmorrey/harness.hpp"

namespace cmorrey {

std::vector<FamilyMember> operator_family(const DomainSpec& dom, const WeightFunction& omega1, std::uint64_t seed) {
  const Point& x0 = dom.x0;
  const double ell = dom.ell;
  // |x|^-s ln^m(A/|x|) sits exactly at the edge of the source space.
  const double s = dom.n - omega1.s;
  const double m = omega1.family == WeightFamily::power_log ? omega1.m : 0.0;
  const double A = 2.0 * ell;
  Point e1{};
  e1[0] = 1.0;
  return {
      {"one", ScalarField::constant(1.0)},
      {"power_half", ScalarField::power(x0, -0.5 * s)},
      {"power_09", ScalarField::power(x0, -0.9 * s)},
      {"critical", ScalarField::power_log(x0, -s, m, A)},
      {"critical_log_half", ScalarField::power_log(x0, -s, m - 0.5, A)},
      {"critical_log_two", ScalarField::power_log(x0, -s, m - 2.0, A)},
      {"half_log", ScalarField::power_log(x0, -0.5 * s, 1.0, A)},
      {"bump_center", ScalarField::ball_indicator(x0, ell / 8.0)},
      {"bump_offset", ScalarField::ball_indicator(along(x0, ell / 5.0, e1), ell / 10.0)},
      {"oscillating", ScalarField::oscillating_power(x0, -0.5 * s, 6.0 * M_PI / ell)},
      {"random_a", ScalarField::random_smooth(x0, dom.n, ell, -0.5 * s, seed)},
      {"random_b", ScalarField::random_smooth(x0, dom.n, ell, -0.5 * s, seed + 1)},
  };
}

std::vector<FamilyMember> embedding_family(const DomainSpec& dom, double p, double lambda) {
  const Point& x0 = dom.x0;
  const double ell = dom.ell;
  const double sc = dom.n / p + lambda * (1.0 - 1.0 / p);
  const double A = 2.0 * ell;
  const double B = std::exp(1.0 + std::exp(1.0)) * ell;
  return {
      {"one", ScalarField::constant(1.0)},
      {"power_half", ScalarField::power(x0, -0.5 * sc)},
      {"power_09", ScalarField::power(x0, -0.9 * sc)},
      {"critical_damped", ScalarField::power_log(x0, -sc, -1.0, A)},
      {"counterexample_f", ScalarField::power(x0, -sc)},
      {"counterexample_g", ScalarField::power_loglog(x0, -sc, B)},
  };
}

std::vector<FamilyMember> embedding_outside_probes(const DomainSpec& dom) {
  Point e1{};
  e1[0] = 1.0;
  return {
      {"bump_center", ScalarField::ball_indicator(dom.x0, dom.ell / 8.0)},
      {"bump_offset", ScalarField::ball_indicator(along(dom.x0, dom.ell / 5.0, e1), dom.ell / 10.0)},
  };
}

}  // namespace cmorrey
