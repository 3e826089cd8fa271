#include "cmorrey/weights.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cmorrey {

WeightFunction WeightFunction::power(double s, double c) {
  return {WeightFamily::power, s, 0.0, 1.0, c};
}

WeightFunction WeightFunction::power_log(double s, double m, double A, double c) {
  return {WeightFamily::power_log, s, m, A, c};
}

WeightFunction WeightFunction::power_loglog(double s, double B, double c) {
  return {WeightFamily::power_loglog, s, 0.0, B, c};
}

double WeightFunction::operator()(double r) const { return std::exp(log_value(std::log(r))); }

double WeightFunction::log_value(double L) const {
  double v = std::log(c) + s * L;
  switch (family) {
    case WeightFamily::power:
      break;
    case WeightFamily::power_log:
      if (m != 0.0) v += m * std::log(std::log(scale) - L);
      break;
    case WeightFamily::power_loglog:
      v += std::log(std::log(std::log(scale) - L));
      break;
  }
  return v;
}

WeightFunction WeightFunction::scaled(double k) const {
  WeightFunction w = *this;
  w.c *= k;
  return w;
}

WeightFunction WeightFunction::times_power(double t) const {
  WeightFunction w = *this;
  w.s += t;
  return w;
}

void WeightFunction::validate(double ell) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("weight: scale factor must be positive");
  if (family == WeightFamily::power_log && m != 0.0 && !(scale > ell))
    throw std::invalid_argument("weight: power_log needs A > ell");
  if (family == WeightFamily::power_loglog && !(scale > std::numbers::e * ell))
    throw std::invalid_argument("weight: power_loglog needs B > e ell");
}

std::string WeightFunction::describe() const {
  std::ostringstream o;
  switch (family) {
    case WeightFamily::power:
      o << "power s=" << s;
      break;
    case WeightFamily::power_log:
      o << "power_log s=" << s << " m=" << m << " A=" << scale;
      break;
    case WeightFamily::power_loglog:
      o << "power_loglog s=" << s << " B=" << scale;
      break;
  }
  if (c != 1.0) o << " c=" << c;
  return o.str();
}

}  // namespace cmorrey
