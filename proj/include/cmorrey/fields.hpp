#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cmorrey/point.hpp"

namespace cmorrey {

// log|v| with the sign of v; sign 0 means v = 0.
struct LogValue {
  double log_abs = 0.0;
  int sign = 0;
};

class FieldNode {
 public:
  virtual ~FieldNode() = default;
  virtual double eval(const Point& y) const = 0;
  virtual bool radial_about(const Point&) const { return false; }
  // Value at distance exp(L) from the radial center, in log form.
  virtual LogValue radial(double) const { return {}; }
  virtual bool singular_at(const Point&) const { return false; }
  virtual std::string describe() const = 0;
};

// Closed-form scalar field on the domain.
class ScalarField {
 public:
  ScalarField();  // zero field

  static ScalarField constant(double c);
  static ScalarField power(const Point& x0, double s);
  // |y-x0|^s ln^m(A/|y-x0|)
  static ScalarField power_log(const Point& x0, double s, double m, double A);
  // |y-x0|^s ln(ln(B/|y-x0|))
  static ScalarField power_loglog(const Point& x0, double s, double B);
  static ScalarField ball_indicator(const Point& c, double r);
  static ScalarField annulus_indicator(const Point& c, double a, double b);
  static ScalarField coordinate(int j);
  // cos(freq |y-x0|) |y-x0|^s
  static ScalarField oscillating_power(const Point& x0, double s, double freq);
  // |y-x0|^s (1 + sum_k a_k cos(2 pi xi_k.(y-x0)/ell + phi_k)), sum |a_k| = 0.6
  static ScalarField random_smooth(const Point& x0, int n, double ell, double s, std::uint64_t seed,
                                   int modes = 6);

  double operator()(const Point& y) const { return node_->eval(y); }
  bool radial_about(const Point& x0) const { return node_->radial_about(x0); }
  LogValue radial(double L) const { return node_->radial(L); }
  bool singular_at(const Point& x0) const { return node_->singular_at(x0); }
  std::string describe() const { return node_->describe(); }

  ScalarField scaled(double c) const;
  ScalarField absolute() const;
  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& f) { return f.scaled(c); }

 private:
  explicit ScalarField(std::shared_ptr<const FieldNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FieldNode> node_;
};

// Operator output sampled at probe points.
struct SampledField {
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<double> errors;
};

}  // namespace cmorrey
