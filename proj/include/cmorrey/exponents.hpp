#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "cmorrey/geometry.hpp"

namespace cmorrey {

struct ExponentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class ExponentNode {
 public:
  virtual ~ExponentNode() = default;
  virtual double eval(const Point& y) const = 0;
  virtual bool radial_about(const Point&) const { return false; }
  virtual double radial(double L) const = 0;  // value at distance exp(L)
  virtual std::pair<double, double> bounds(const DomainSpec& dom) const = 0;
  virtual bool is_constant() const { return false; }
  virtual std::string describe() const = 0;
};

// Closed-form variable exponent (or variable order) on the domain.
class ExponentField {
 public:
  static ExponentField constant(double c);
  // a + b |y-x0|
  static ExponentField radial_affine(const Point& x0, double a, double b);
  // a + b / ln(C/|y-x0|), C larger than every distance to x0
  static ExponentField radial_log(const Point& x0, double a, double b, double C);
  // a + b cos(c |y-x0|)
  static ExponentField radial_cos(const Point& x0, double a, double b, double c);
  // a + b |y-x0|^gamma sgn(y_j - x0_j): discontinuous across a hyperplane
  static ExponentField power_jump(const Point& x0, double a, double b, double gamma, int j = 0);

  double operator()(const Point& y) const { return node_->eval(y); }
  bool radial_about(const Point& x0) const { return node_->radial_about(x0); }
  double radial(double L) const { return node_->radial(L); }
  // Infimum and supremum over the closure of the domain.
  std::pair<double, double> bounds(const DomainSpec& dom) const { return node_->bounds(dom); }
  bool is_constant() const { return node_->is_constant(); }
  std::string describe() const { return node_->describe(); }

  explicit ExponentField(std::shared_ptr<const ExponentNode> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const ExponentNode> node_;
};

// p'(x) = p(x)/(p(x)-1); throws when p <= 1 somewhere in the domain.
ExponentField conjugate(const ExponentField& p, const DomainSpec& dom);
// q(x) = n p(x) / (n - alpha(x) p(x)); throws unless inf alpha > 0 and sup alpha p < n.
ExponentField sobolev_exponent(const ExponentField& p, const ExponentField& alpha, const DomainSpec& dom);

// 1 < p- <= p+ < infinity, or a constant p >= 1 when allow_one_constant.
void validate_lebesgue_exponent(const ExponentField& p, const DomainSpec& dom, bool allow_one_constant = false);
// 0 < inf alpha <= sup alpha < n
void validate_order(const ExponentField& alpha, const DomainSpec& dom);

struct LogHolderCertificate {
  double A = 0.0;
  std::size_t verified_pairs = 0;
  double max_violation = 0.0;
  // A computed from the first eighth of the samples; a large jump between the
  // two estimates signals that the sup keeps growing under refinement.
  double A_coarse = 0.0;
  bool stable = true;
};

LogHolderCertificate check_log_holder(const ExponentField& p, const DomainSpec& dom, int samples,
                                      std::uint64_t seed = 1);

}  // namespace cmorrey
