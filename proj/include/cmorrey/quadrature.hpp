#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cmorrey {

// Rule on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Kronrod extension with the embedded Gauss weights (zero on Kronrod-only nodes).
struct KronrodRule {
  std::vector<double> x;
  std::vector<double> w;
  std::vector<double> w_gauss;
};

const GaussRule& gauss_legendre(int m);  // 1 <= m <= 96
const KronrodRule& kronrod7();            // G3 / K7
const KronrodRule& kronrod15();           // G7 / K15

double pairwise_sum(std::span<const double> v);

struct LogRadialIntegral {
  double value = 0.0;
  bool divergent = false;
  int bands = 0;
};

// Integral over L in [L_lo, L_hi] of exp(h(L)) dL, with L_lo possibly -inf.
// The integrand is passed in log form so that radii far below the double range
// (L = ln t with t ~ exp(-1e6)) can be probed. The lower part u = L_hi - L > 1 is
// mapped to tau = 1/u and integrated on dyadic tau-bands.
LogRadialIntegral integrate_log_radial(const std::function<double(double)>& h, double L_hi,
                                       double L_lo);

}  // namespace cmorrey
