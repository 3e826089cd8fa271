#pragma once

#include <optional>
#include <string>

#include "cmorrey/exponents.hpp"
#include "cmorrey/geometry.hpp"
#include "cmorrey/weights.hpp"

namespace cmorrey {

enum class VerdictMethod { closed_form, quadrature };

const char* to_string(VerdictMethod m);

// Conditions of the form sup_{0<r<ell} R(r) < infinity (or inf R > 0) are
// decided on the ladder r_k = ell 2^-k, a trend fit over its innermost radii
// and two probes far below the ladder (ln(ell/r) = 1e5 and 1e6).
struct ConditionVerdict {
  std::string condition;
  bool holds = false;
  double best_constant = 0.0;  // sup (or inf) of the ratio; +inf when unbounded
  std::optional<double> witness_radius;
  VerdictMethod method = VerdictMethod::quadrature;
  bool vacuous = false;  // a prerequisite failed
  std::string note;
};

std::string verdict_csv_header();
std::string to_csv(const ConditionVerdict& v);

// sup_r r^{n/p'(x0)} / omega(r) < infinity
ConditionVerdict check_nontriviality(const WeightFunction& omega, const ExponentField& p, const DomainSpec& dom,
                                     int depth = 24);
// r^{n/p'(x0)} / omega(r) -> 0 as r -> 0
ConditionVerdict check_degeneracy(const WeightFunction& omega, const ExponentField& p, const DomainSpec& dom,
                                  int depth = 24);

struct DiniValue {
  double value = 0.0;  // +inf when divergent
  VerdictMethod method = VerdictMethod::quadrature;
};

// int_0^t omega(r) dr / r. The closed form covers the power and power_log
// families; otherwise (or when quadrature is requested) the integral is taken
// in the variable ln r.
DiniValue dini_integral(const WeightFunction& omega, double t, bool force_quadrature = false);

ConditionVerdict check_dini(const WeightFunction& omega, double ell, bool force_quadrature = false);

// sup_t t^alpha int_0^t omega1(r) dr/r / omega2(t); alpha = 0 gives the
// condition for the maximal and singular operators.
ConditionVerdict check_zygmund_pair(const WeightFunction& omega1, const WeightFunction& omega2, double alpha_at_x0,
                                    double ell, bool force_quadrature = false, int depth = 24);

// inf_r rho(r) omega(r)^p / r^{n(p-1)} > 0
ConditionVerdict check_weighted_embedding_condition(const WeightFunction& rho, const WeightFunction& omega, double p,
                                                    int n, double ell, int depth = 24);

}  // namespace cmorrey
