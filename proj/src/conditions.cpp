#include "cmorrey/conditions.hpp"

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <vector>

#include "cmorrey/quadrature.hpp"
#include "cmorrey/trend.hpp"

namespace cmorrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeepShallow = 1e5;
constexpr double kDeepFar = 1e6;

struct Scan {
  double best = 0.0;
  double witness = 0.0;
  bool divergent = false;
  double deep_shallow = 0.0;  // log ratio at the two deep probes
  double deep_far = 0.0;
};

// sup over (0, ell] of exp(log_ratio(ln r)).
Scan scan_sup(const std::function<double(double)>& log_ratio, double ell, int depth) {
  Scan s;
  RadialLadder ladder{ell, depth};
  std::vector<double> radii = ladder.radii(), vals(radii.size());
  s.best = -kInf;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    vals[k] = std::exp(log_ratio(std::log(radii[k])));
    if (vals[k] > s.best || std::isnan(vals[k])) {
      s.best = vals[k];
      s.witness = radii[k];
    }
  }
  // The ratio is analytic, so the probes far below the ladder decide; the
  // ladder trend alone mistakes slow logarithmic convergence for growth.
  s.deep_shallow = log_ratio(std::log(ell) - kDeepShallow);
  s.deep_far = log_ratio(std::log(ell) - kDeepFar);
  bool deep_up = !(s.deep_far <= s.deep_shallow + std::log1p(kDeepGrowth));
  s.divergent = deep_up || !std::isfinite(s.best);
  if (s.divergent) {
    s.best = kInf;
  } else {
    double deep = std::exp(std::max(s.deep_shallow, s.deep_far));
    if (deep > s.best) {
      s.best = deep;
      s.witness = radii.back();
    }
  }
  return s;
}

// Upper incomplete gamma for any real a and x > 0.
double upper_gamma(double a, double x) {
  if (a > 0.0) return boost::math::tgamma(a, x);
  if (a == 0.0) return boost::math::expint(1, x);
  // Gamma(a, x) = (Gamma(a+1, x) - x^a e^-x) / a
  return (upper_gamma(a + 1.0, x) - std::pow(x, a) * std::exp(-x)) / a;
}

bool has_closed_form(const WeightFunction& w) { return w.family != WeightFamily::power_loglog; }

double dini_closed(const WeightFunction& w, double t) {
  const double s = w.s, c = w.c;
  if (w.family == WeightFamily::power || w.m == 0.0) return s > 0.0 ? c * std::pow(t, s) / s : kInf;
  // u = ln(A/r): int_{u_t}^inf c A^s e^{-s u} u^m du
  const double m = w.m, A = w.scale, ut = std::log(A / t);
  if (s > 0.0) return c * std::pow(A, s) * std::pow(s, -(m + 1.0)) * upper_gamma(m + 1.0, s * ut);
  if (s == 0.0) return m < -1.0 ? c * std::pow(ut, m + 1.0) / (-(m + 1.0)) : kInf;
  return kInf;
}

// ln of int_{-inf}^{L} omega(e^u) du, normalized at L for stability far below the double range.
double log_dini_quadrature(const WeightFunction& w, double L) {
  double top = w.log_value(L);
  auto h = [&](double u) { return w.log_value(u) - top; };
  LogRadialIntegral I = integrate_log_radial(h, L, -kInf);
  if (I.divergent || !std::isfinite(I.value)) return kInf;
  return top + std::log(I.value);
}

ConditionVerdict make(const char* name, const Scan& s, VerdictMethod m) {
  ConditionVerdict v;
  v.condition = name;
  v.holds = !s.divergent;
  v.best_constant = s.best;
  v.witness_radius = s.witness;
  v.method = m;
  return v;
}

double n_over_conjugate(const ExponentField& p, const DomainSpec& dom) {
  double pc = p(dom.x0);
  if (!(pc >= 1.0)) throw ExponentError("exponent at x0 must be at least 1");
  return dom.n * (1.0 - 1.0 / pc);
}

}  // namespace

const char* to_string(VerdictMethod m) { return m == VerdictMethod::closed_form ? "closed_form" : "quadrature"; }

std::string verdict_csv_header() { return "condition,holds,best_constant,witness_radius,method"; }

std::string to_csv(const ConditionVerdict& v) {
  char buf[256];
  char w[64] = "";
  if (v.witness_radius) std::snprintf(w, sizeof w, "%.17g", *v.witness_radius);
  std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%s,%s", v.condition.c_str(), v.holds ? 1 : 0, v.best_constant, w,
                to_string(v.method));
  return buf;
}

ConditionVerdict check_nontriviality(const WeightFunction& omega, const ExponentField& p, const DomainSpec& dom,
                                     int depth) {
  omega.validate(dom.ell);
  const double a = n_over_conjugate(p, dom);
  Scan s = scan_sup([&](double L) { return a * L - omega.log_value(L); }, dom.ell, depth);
  return make("nontriviality", s, VerdictMethod::closed_form);
}

ConditionVerdict check_degeneracy(const WeightFunction& omega, const ExponentField& p, const DomainSpec& dom,
                                  int depth) {
  omega.validate(dom.ell);
  const double a = n_over_conjugate(p, dom);
  Scan s = scan_sup([&](double L) { return a * L - omega.log_value(L); }, dom.ell, depth);
  ConditionVerdict v = make("degeneracy", s, VerdictMethod::closed_form);
  // The ratio has to keep falling far below the ladder.
  v.holds = !s.divergent && s.deep_far < s.deep_shallow + std::log1p(-kDeepGrowth);
  v.best_constant = std::exp(s.deep_far);
  return v;
}

DiniValue dini_integral(const WeightFunction& omega, double t, bool force_quadrature) {
  if (!(t > 0.0)) throw std::invalid_argument("dini_integral: t must be positive");
  DiniValue d;
  if (!force_quadrature && has_closed_form(omega)) {
    d.value = dini_closed(omega, t);
    d.method = VerdictMethod::closed_form;
  } else {
    d.value = std::exp(log_dini_quadrature(omega, std::log(t)));
    d.method = VerdictMethod::quadrature;
  }
  return d;
}

ConditionVerdict check_dini(const WeightFunction& omega, double ell, bool force_quadrature) {
  omega.validate(ell);
  DiniValue d = dini_integral(omega, ell, force_quadrature);
  ConditionVerdict v;
  v.condition = "dini";
  v.method = d.method;
  v.holds = std::isfinite(d.value);
  v.best_constant = d.value;
  return v;
}

ConditionVerdict check_zygmund_pair(const WeightFunction& omega1, const WeightFunction& omega2, double alpha_at_x0,
                                    double ell, bool force_quadrature, int depth) {
  omega1.validate(ell);
  omega2.validate(ell);
  if (!(alpha_at_x0 >= 0.0)) throw std::invalid_argument("zygmund: alpha(x0) must be nonnegative");
  ConditionVerdict dini = check_dini(omega1, ell, force_quadrature);
  const bool closed = !force_quadrature && has_closed_form(omega1);
  if (!dini.holds) {
    ConditionVerdict v;
    v.condition = "zygmund";
    v.holds = false;
    v.vacuous = true;
    v.best_constant = kInf;
    v.method = dini.method;
    v.note = "vacuously fails: Dini condition fails for omega1";
    return v;
  }
  const double top = std::log(ell) - 40.0;
  auto log_ratio = [&](double L) {
    // The closed form is used on the ladder; probes below it use the
    // normalized quadrature, which stays finite at any depth.
    double ld = closed && L > top ? std::log(dini_closed(omega1, std::exp(L))) : log_dini_quadrature(omega1, L);
    return alpha_at_x0 * L + ld - omega2.log_value(L);
  };
  Scan s = scan_sup(log_ratio, ell, depth);
  return make("zygmund", s, closed ? VerdictMethod::closed_form : VerdictMethod::quadrature);
}

ConditionVerdict check_weighted_embedding_condition(const WeightFunction& rho, const WeightFunction& omega, double p,
                                                    int n, double ell, int depth) {
  rho.validate(ell);
  omega.validate(ell);
  if (!(p >= 1.0)) throw std::invalid_argument("embedding condition needs p >= 1");
  // inf R = 1 / sup (1/R)
  auto log_inv = [&](double L) { return -(rho.log_value(L) + p * omega.log_value(L) - n * (p - 1.0) * L); };
  Scan s = scan_sup(log_inv, ell, depth);
  ConditionVerdict v = make("weighted_embedding", s, VerdictMethod::closed_form);
  v.best_constant = s.divergent ? 0.0 : 1.0 / s.best;
  return v;
}

}  // namespace cmorrey
