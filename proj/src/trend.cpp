#include "cmorrey/trend.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <vector>

namespace cmorrey {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const std::size_t m = x.size();
  if (m < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) mx += x[i], my += y[i];
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (m > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double e = y[i] - f.intercept - f.slope * x[i];
      rss += e * e;
    }
    f.slope_se = std::sqrt(rss / (m - 2) / sxx);
    f.t_stat = f.slope_se > 0.0 ? f.slope / f.slope_se
                                : (f.slope > 0.0 ? std::numeric_limits<double>::infinity()
                                                 : (f.slope < 0.0 ? -std::numeric_limits<double>::infinity() : 0.0));
  }
  return f;
}

GrowthVerdict ladder_growth(std::span<const double> radii, std::span<const double> values, int window) {
  GrowthVerdict g;
  const std::size_t m = std::min<std::size_t>(window, values.size());
  if (m < 3) return g;
  std::vector<double> x, y;
  for (std::size_t i = values.size() - m; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      g.divergent = true;
      g.slope = std::numeric_limits<double>::infinity();
      return g;
    }
    x.push_back(-std::log(radii[i]));
    y.push_back(values[i]);
  }
  LineFit f = fit_line(x, y);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= y.size();
  g.slope = f.slope;
  g.t_stat = f.t_stat;
  g.relative_slope = mean > 0.0 ? f.slope / mean : 0.0;
  boost::math::students_t dist(static_cast<double>(m - 2));
  double tcrit = boost::math::quantile(dist, 0.95);
  g.divergent = f.slope > 0.0 && f.t_stat > tcrit && g.relative_slope > kMinRelativeSlope;
  return g;
}

bool deep_growth(double shallow, double deep) {
  if (!std::isfinite(deep)) return true;
  if (!(shallow > 0.0)) return deep > 0.0;
  return deep > shallow * (1.0 + kDeepGrowth);
}

}  // namespace cmorrey
