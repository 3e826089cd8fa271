#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmorrey/exponents.hpp"
#include "cmorrey/fields.hpp"
#include "cmorrey/geometry.hpp"
#include "cmorrey/weights.hpp"

namespace cmorrey {

// mu(E) = int_E |y-x0|^nu ln^m(A/|y-x0|) dy, with m = 0 for the plain power weight.
struct WeightedMeasure {
  double nu = 0.0;
  double log_power = 0.0;
  double log_scale = 1.0;

  static WeightedMeasure power(double nu) { return {nu, 0.0, 1.0}; }
  // |y-x0|^nu / ln^{1+eps}(A/|y-x0|)
  static WeightedMeasure log_damped(double nu, double eps, double A) { return {nu, -(1.0 + eps), A}; }
  WeightFunction density() const;
};

struct NormReport {
  std::string kind;
  double value = 0.0;  // +inf when the norm is declared infinite
  double ladder_max = 0.0;
  std::optional<double> argmax_radius;
  double quadrature_error = 0.0;
  double truncation_radius = 0.0;
  bool divergent = false;
  double growth_slope = 0.0;
  std::vector<double> ladder_radii;
  std::vector<double> ladder_values;
};

std::string norm_csv_header();
std::string to_csv(const NormReport& r);

struct ModularResult {
  double value = 0.0;
  double error = 0.0;
  double truncation_radius = 0.0;
  bool divergent = false;
};

// Integral of |f|^p over {y in Omega : r_in < |y-x0| < r_out}.
ModularResult modular(const ScalarField& f, const ExponentField& p, const DomainSpec& dom, double r_in = 0.0,
                      double r_out = std::numeric_limits<double>::infinity(), const GridOptions& opt = {});

NormReport luxemburg_norm(const ScalarField& f, const ExponentField& p, const DomainSpec& dom,
                          double r_in = 0.0, double r_out = std::numeric_limits<double>::infinity(),
                          const GridOptions& opt = {});

// Same with the bisection forced even for constant p (used to check the closed form).
NormReport luxemburg_norm_bisection(const ScalarField& f, const ExponentField& p, const DomainSpec& dom,
                                    const GridOptions& opt = {});

// Luxemburg norms of f over the exteriors Omega \ B(x0, r_k), k = 0..K, of a full grid.
std::vector<double> exterior_norms(const ScalarField& f, const ExponentField& p, const QuadratureGrid& grid);

NormReport complementary_morrey_norm(const ScalarField& f, const ExponentField& p, const WeightFunction& omega,
                                     const QuadratureGrid& grid);
// Field sampled at the nodes of `grid`.
NormReport complementary_morrey_norm(std::span<const double> values, const ExponentField& p,
                                     const WeightFunction& omega, const QuadratureGrid& grid);

NormReport weighted_lebesgue_norm(const ScalarField& f, double p, const WeightedMeasure& mu,
                                  const QuadratureGrid& grid);

// sup_t t mu{|f| > t}^{1/p}. An empty threshold list means the exact supremum
// over all t (radial level sets are resolved analytically where possible).
NormReport weak_weighted_norm(const ScalarField& f, double p, const WeightedMeasure& mu,
                              const QuadratureGrid& grid, std::span<const double> thresholds = {});

// Local Morrey norm at the grid center; `centers` adds the global variant.
NormReport classical_morrey_norm(const ScalarField& f, const ExponentField& p, const ExponentField& lambda,
                                 const QuadratureGrid& grid, std::span<const Point> centers = {});

}  // namespace cmorrey
