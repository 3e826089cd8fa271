#pragma once

#include <string>

namespace cmorrey {

enum class WeightFamily { power, power_log, power_loglog };

// omega(r) on (0, ell]:
//   power:        c r^s
//   power_log:    c r^s ln^m(A/r)      (A > ell)
//   power_loglog: c r^s ln(ln(B/r))    (B > e ell)
struct WeightFunction {
  WeightFamily family = WeightFamily::power;
  double s = 0.0;
  double m = 0.0;
  double scale = 1.0;  // A or B
  double c = 1.0;

  static WeightFunction power(double s, double c = 1.0);
  static WeightFunction power_log(double s, double m, double A, double c = 1.0);
  static WeightFunction power_loglog(double s, double B, double c = 1.0);

  double operator()(double r) const;
  double log_value(double L) const;  // ln omega(exp(L))
  WeightFunction scaled(double k) const;
  WeightFunction times_power(double t) const;
  // Throws unless omega is positive and finite on (0, ell].
  void validate(double ell) const;
  std::string describe() const;
};

}  // namespace cmorrey
