#pragma once

#include <span>

namespace cmorrey {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double t_stat = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct GrowthVerdict {
  bool divergent = false;
  double slope = 0.0;           // per unit ln(1/r)
  double relative_slope = 0.0;  // slope / mean value
  double t_stat = 0.0;
};

// Trend of ladder values against ln(1/r) over the innermost `window` radii.
// Divergent when the slope is positive with one-sided 95% significance and the
// relative slope exceeds kMinRelativeSlope.
inline constexpr double kMinRelativeSlope = 0.003;
GrowthVerdict ladder_growth(std::span<const double> radii, std::span<const double> values, int window = 6);

// Two values of a quantity at far-apart radii deep below the grid (ln(ell/r) of
// order 1e5 and 1e6): a quantity that converges as r -> 0 changes by far less
// than kDeepGrowth there, while ln ln-type growth changes by about 20%.
inline constexpr double kDeepGrowth = 0.01;
bool deep_growth(double shallow, double deep);

}  // namespace cmorrey
