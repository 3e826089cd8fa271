#include "cmorrey/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace cmorrey {

namespace {

class Constant final : public ExponentNode {
 public:
  explicit Constant(double c) : c_(c) {}
  double eval(const Point&) const override { return c_; }
  bool radial_about(const Point&) const override { return true; }
  double radial(double) const override { return c_; }
  std::pair<double, double> bounds(const DomainSpec&) const override { return {c_, c_}; }
  bool is_constant() const override { return true; }
  std::string describe() const override {
    std::ostringstream s;
    s << "constant " << c_;
    return s.str();
  }

 private:
  double c_;
};

class RadialBase : public ExponentNode {
 public:
  explicit RadialBase(const Point& x0) : x0_(x0) {}
  double eval(const Point& y) const override { return at(distance(y, x0_)); }
  bool radial_about(const Point& x0) const override { return x0 == x0_; }
  double radial(double L) const override { return at(std::exp(L)); }
  virtual double at(double rho) const = 0;

 protected:
  double rho_max(const DomainSpec& dom) const { return dom.max_distance_from(x0_); }
  Point x0_;
};

class Affine final : public RadialBase {
 public:
  Affine(const Point& x0, double a, double b) : RadialBase(x0), a_(a), b_(b) {}
  double at(double rho) const override { return a_ + b_ * rho; }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    double e = a_ + b_ * rho_max(dom);
    return {std::min(a_, e), std::max(a_, e)};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "radial_affine a=" << a_ << " b=" << b_;
    return s.str();
  }

 private:
  double a_, b_;
};

class LogField final : public RadialBase {
 public:
  LogField(const Point& x0, double a, double b, double C) : RadialBase(x0), a_(a), b_(b), C_(C) {}
  double at(double rho) const override { return rho == 0.0 ? a_ : a_ + b_ / std::log(C_ / rho); }
  double radial(double L) const override { return a_ + b_ / (std::log(C_) - L); }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    double rm = rho_max(dom);
    if (!(C_ > rm)) throw ExponentError("radial_log: C must exceed every distance to x0");
    double e = at(rm);
    return {std::min(a_, e), std::max(a_, e)};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "radial_log a=" << a_ << " b=" << b_ << " C=" << C_;
    return s.str();
  }

 private:
  double a_, b_, C_;
};

class CosField final : public RadialBase {
 public:
  CosField(const Point& x0, double a, double b, double c) : RadialBase(x0), a_(a), b_(b), c_(std::abs(c)) {}
  double at(double rho) const override { return a_ + b_ * std::cos(c_ * rho); }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    double t = c_ * rho_max(dom);
    double lo = t >= M_PI ? -1.0 : std::cos(t);
    double u = a_ + b_ * lo, v = a_ + b_;
    return {std::min(u, v), std::max(u, v)};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "radial_cos a=" << a_ << " b=" << b_ << " c=" << c_;
    return s.str();
  }

 private:
  double a_, b_, c_;
};

class Jump final : public ExponentNode {
 public:
  Jump(const Point& x0, double a, double b, double gamma, int j)
      : x0_(x0), a_(a), b_(b), gamma_(gamma), j_(j) {}
  double eval(const Point& y) const override {
    double d = y[j_] - x0_[j_];
    double sg = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    return a_ + b_ * std::pow(distance(y, x0_), gamma_) * sg;
  }
  double radial(double) const override { return a_; }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    double m = std::abs(b_) * std::pow(dom.max_distance_from(x0_), gamma_);
    return {a_ - m, a_ + m};
  }
  std::string describe() const override {
    std::ostringstream s;
    s << "power_jump a=" << a_ << " b=" << b_ << " gamma=" << gamma_ << " axis=" << j_;
    return s.str();
  }

 private:
  Point x0_;
  double a_, b_, gamma_;
  int j_;
};

class Conjugate final : public ExponentNode {
 public:
  explicit Conjugate(ExponentField p) : p_(std::move(p)) {}
  static double conj(double p) { return p / (p - 1.0); }
  double eval(const Point& y) const override { return conj(p_(y)); }
  bool radial_about(const Point& x0) const override { return p_.radial_about(x0); }
  double radial(double L) const override { return conj(p_.radial(L)); }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    auto [lo, hi] = p_.bounds(dom);
    return {conj(hi), conj(lo)};
  }
  bool is_constant() const override { return p_.is_constant(); }
  std::string describe() const override { return "conjugate(" + p_.describe() + ")"; }

 private:
  ExponentField p_;
};

class Sobolev final : public ExponentNode {
 public:
  Sobolev(ExponentField p, ExponentField alpha, int n) : p_(std::move(p)), a_(std::move(alpha)), n_(n) {}
  double q(double p, double a) const { return n_ * p / (n_ - a * p); }
  double eval(const Point& y) const override { return q(p_(y), a_(y)); }
  bool radial_about(const Point& x0) const override { return p_.radial_about(x0) && a_.radial_about(x0); }
  double radial(double L) const override { return q(p_.radial(L), a_.radial(L)); }
  std::pair<double, double> bounds(const DomainSpec& dom) const override {
    auto [pl, ph] = p_.bounds(dom);
    auto [al, ah] = a_.bounds(dom);
    return {q(pl, al), q(ph, ah)};
  }
  bool is_constant() const override { return p_.is_constant() && a_.is_constant(); }
  std::string describe() const override {
    std::ostringstream s;
    s << "sobolev(" << p_.describe() << ", " << a_.describe() << ", n=" << n_ << ")";
    return s.str();
  }

 private:
  ExponentField p_, a_;
  int n_;
};

}  // namespace

ExponentField ExponentField::constant(double c) {
  if (!std::isfinite(c)) throw ExponentError("constant exponent must be finite");
  return ExponentField(std::make_shared<Constant>(c));
}

ExponentField ExponentField::radial_affine(const Point& x0, double a, double b) {
  return ExponentField(std::make_shared<Affine>(x0, a, b));
}

ExponentField ExponentField::radial_log(const Point& x0, double a, double b, double C) {
  if (!(C > 0.0)) throw ExponentError("radial_log: C must be positive");
  return ExponentField(std::make_shared<LogField>(x0, a, b, C));
}

ExponentField ExponentField::radial_cos(const Point& x0, double a, double b, double c) {
  return ExponentField(std::make_shared<CosField>(x0, a, b, c));
}

ExponentField ExponentField::power_jump(const Point& x0, double a, double b, double gamma, int j) {
  if (!(gamma > 0.0)) throw ExponentError("power_jump: gamma must be positive");
  return ExponentField(std::make_shared<Jump>(x0, a, b, gamma, j));
}

void validate_lebesgue_exponent(const ExponentField& p, const DomainSpec& dom, bool allow_one_constant) {
  auto [lo, hi] = p.bounds(dom);
  if (!std::isfinite(hi)) throw ExponentError("exponent must be bounded above");
  if (allow_one_constant && p.is_constant() && lo >= 1.0) return;
  if (!(lo > 1.0)) throw ExponentError("exponent must satisfy 1 < p- (p = 1 only for constant fields)");
}

void validate_order(const ExponentField& alpha, const DomainSpec& dom) {
  auto [lo, hi] = alpha.bounds(dom);
  if (!(lo > 0.0)) throw ExponentError("order must satisfy inf alpha > 0");
  if (!(hi < dom.n)) throw ExponentError("order must satisfy sup alpha < n");
}

ExponentField conjugate(const ExponentField& p, const DomainSpec& dom) {
  auto [lo, hi] = p.bounds(dom);
  if (!(lo > 1.0) || !std::isfinite(hi)) throw ExponentError("conjugate: needs 1 < p- <= p+ < infinity");
  return ExponentField(std::make_shared<Conjugate>(p));
}

ExponentField sobolev_exponent(const ExponentField& p, const ExponentField& alpha, const DomainSpec& dom) {
  validate_lebesgue_exponent(p, dom);
  auto [al, ah] = alpha.bounds(dom);
  if (!(al > 0.0)) throw ExponentError("sobolev_exponent: needs inf alpha > 0");
  auto [pl, ph] = p.bounds(dom);
  if (!(ah * ph < dom.n)) throw ExponentError("sobolev_exponent: needs sup alpha p < n");
  return ExponentField(std::make_shared<Sobolev>(p, alpha, dom.n));
}

LogHolderCertificate check_log_holder(const ExponentField& p, const DomainSpec& dom, int samples,
                                      std::uint64_t seed) {
  if (samples < 2) throw ExponentError("check_log_holder: needs at least 2 samples");
  std::mt19937_64 gen(seed);
  auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  const int n = dom.n;
  auto direction = [&] {
    Point u{};
    do {
      for (int d = 0; d < n; ++d) u[d] = 2.0 * unit() - 1.0;
    } while (norm(u) > 1.0 || norm(u) < 1e-3);
    return (1.0 / norm(u)) * u;
  };
  Point lo = dom.shape == Shape::ball ? dom.center - Point{dom.radius, dom.radius, dom.radius} : dom.lo;
  Point hi = dom.shape == Shape::ball ? dom.center + Point{dom.radius, dom.radius, dom.radius} : dom.hi;
  auto uniform = [&] {
    Point y{};
    do {
      for (int d = 0; d < n; ++d) y[d] = lo[d] + (hi[d] - lo[d]) * unit();
    } while (!dom.contains(y));
    return y;
  };
  const double delta = dom.delta();

  std::vector<Point> base;
  std::vector<Point> partner;
  for (int i = 0; i < samples; ++i) {
    Point y = i % 2 == 0 ? uniform() : along(dom.x0, delta * std::exp2(-30.0 * unit()), direction());
    base.push_back(y);
    Point z = along(y, 0.5 * std::exp2(-40.0 * unit()), direction());
    partner.push_back(dom.contains(z) ? z : y);
  }

  LogHolderCertificate cert;
  const int coarse = std::max(2, samples / 8);
  auto score = [&](const Point& x, const Point& y) {
    double d = distance(x, y);
    if (!(d > 0.0) || d > 0.5) return -1.0;
    return std::abs(p(x) - p(y)) * (-std::log(d));
  };
  auto consider = [&](int i, double v) {
    if (v < 0.0) return;
    ++cert.verified_pairs;
    cert.max_violation = std::max(cert.max_violation, v);
    if (i < coarse) cert.A_coarse = std::max(cert.A_coarse, v);
  };
  const int dense = std::min(samples, 512);
  for (int i = 0; i < samples; ++i) {
    consider(i, score(base[i], partner[i]));
    consider(i, score(base[i], dom.x0));
    if (i < dense) {
      for (int k = 0; k < i; ++k) consider(i, score(base[i], base[k]));
    }
  }
  cert.A = cert.max_violation;
  cert.stable = cert.A <= 1.15 * cert.A_coarse + 1e-12;
  return cert;
}

}  // namespace cmorrey
