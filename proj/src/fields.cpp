#include "cmorrey/fields.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace cmorrey {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool same_point(const Point& a, const Point& b) { return a == b; }

LogValue log_of(double v) {
  if (v == 0.0) return {kNegInf, 0};
  return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

class Constant final : public FieldNode {
 public:
  explicit Constant(double c) : c_(c) {}
  double eval(const Point&) const override { return c_; }
  bool radial_about(const Point&) const override { return true; }
  LogValue radial(double) const override { return log_of(c_); }
  std::string describe() const override {
    std::ostringstream s;
    s << "constant " << c_;
    return s.str();
  }

 private:
  double c_;
};

// |y-x0|^s ln^m(A/r) ln(ln(B/r))^k with k in {0,1}
class PowerFamily final : public FieldNode {
 public:
  PowerFamily(const Point& x0, double s, double m, double A, bool loglog, double B)
      : x0_(x0), s_(s), m_(m), A_(A), loglog_(loglog), B_(B) {}

  double eval(const Point& y) const override {
    double r = distance(y, x0_);
    double v = std::pow(r, s_);
    if (m_ != 0.0) v *= std::pow(std::log(A_ / r), m_);
    if (loglog_) v *= std::log(std::log(B_ / r));
    return v;
  }
  bool radial_about(const Point& x0) const override { return same_point(x0, x0_); }
  LogValue radial(double L) const override {
    double la = s_ * L;
    if (m_ != 0.0) la += m_ * std::log(std::log(A_) - L);
    if (loglog_) la += std::log(std::log(std::log(B_) - L));
    return {la, 1};
  }
  bool singular_at(const Point& x0) const override {
    return same_point(x0, x0_) && (s_ < 0.0 || (s_ == 0.0 && (m_ > 0.0 || loglog_)));
  }
  std::string describe() const override {
    std::ostringstream s;
    if (loglog_) {
      s << "power_loglog s=" << s_ << " B=" << B_;
    } else if (m_ != 0.0) {
      s << "power_log s=" << s_ << " m=" << m_ << " A=" << A_;
    } else {
      s << "power s=" << s_;
    }
    return s.str();
  }

 private:
  Point x0_;
  double s_, m_, A_;
  bool loglog_;
  double B_;
};

class AnnulusIndicator final : public FieldNode {
 public:
  AnnulusIndicator(const Point& c, double a, double b) : c_(c), a_(a), b_(b) {}
  double eval(const Point& y) const override {
    double r = distance(y, c_);
    return (r >= a_ && r < b_) ? 1.0 : 0.0;
  }
  bool radial_about(const Point& x0) const override { return same_point(x0, c_); }
  LogValue radial(double L) const override {
    double r = std::exp(L);
    return (r >= a_ && r < b_) ? LogValue{0.0, 1} : LogValue{kNegInf, 0};
  }
  std::string describe() const override {
    std::ostringstream s;
    if (a_ == 0.0) {
      s << "ball_indicator r=" << b_;
    } else {
      s << "annulus_indicator " << a_ << ".." << b_;
    }
    return s.str();
  }

 private:
  Point c_;
  double a_, b_;
};

class Coordinate final : public FieldNode {
 public:
  explicit Coordinate(int j) : j_(j) {}
  double eval(const Point& y) const override { return y[j_]; }
  std::string describe() const override { return "coordinate " + std::to_string(j_); }

 private:
  int j_;
};

class Oscillating final : public FieldNode {
 public:
  Oscillating(const Point& x0, double s, double freq) : x0_(x0), s_(s), freq_(freq) {}
  double eval(const Point& y) const override {
    double r = distance(y, x0_);
    return std::cos(freq_ * r) * std::pow(r, s_);
  }
  bool radial_about(const Point& x0) const override { return same_point(x0, x0_); }
  LogValue radial(double L) const override {
    double c = std::cos(freq_ * std::exp(L));
    LogValue v = log_of(c);
    v.log_abs += s_ * L;
    return v;
  }
  bool singular_at(const Point& x0) const override { return same_point(x0, x0_) && s_ < 0.0; }
  std::string describe() const override {
    std::ostringstream s;
    s << "oscillating_power s=" << s_ << " freq=" << freq_;
    return s.str();
  }

 private:
  Point x0_;
  double s_, freq_;
};

class RandomSmooth final : public FieldNode {
 public:
  RandomSmooth(const Point& x0, int n, double ell, double s, std::uint64_t seed, int modes)
      : x0_(x0), s_(s), seed_(seed) {
    std::mt19937_64 gen(seed);
    auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    double total = 0.0;
    for (int k = 0; k < modes; ++k) {
      Mode md;
      for (int d = 0; d < n; ++d) md.xi[d] = 2.0 * std::numbers::pi * (6.0 * unit() - 3.0) / ell;
      md.phase = 2.0 * std::numbers::pi * unit();
      md.amp = unit() + 0.1;
      total += md.amp;
      modes_.push_back(md);
    }
    for (auto& md : modes_) md.amp *= 0.6 / total;
  }
  double eval(const Point& y) const override {
    Point d = y - x0_;
    double v = 1.0;
    for (const auto& md : modes_) v += md.amp * std::cos(dot(md.xi, d) + md.phase);
    return v * std::pow(norm(d), s_);
  }
  bool singular_at(const Point& x0) const override { return same_point(x0, x0_) && s_ < 0.0; }
  std::string describe() const override {
    std::ostringstream s;
    s << "random_smooth s=" << s_ << " seed=" << seed_;
    return s.str();
  }

 private:
  struct Mode {
    Point xi{};
    double phase = 0.0;
    double amp = 0.0;
  };
  Point x0_;
  double s_;
  std::uint64_t seed_;
  std::vector<Mode> modes_;
};

class Scaled final : public FieldNode {
 public:
  Scaled(std::shared_ptr<const FieldNode> f, double c) : f_(std::move(f)), c_(c) {}
  double eval(const Point& y) const override { return c_ * f_->eval(y); }
  bool radial_about(const Point& x0) const override { return f_->radial_about(x0); }
  LogValue radial(double L) const override {
    if (c_ == 0.0) return {kNegInf, 0};
    LogValue v = f_->radial(L);
    v.log_abs += std::log(std::abs(c_));
    if (c_ < 0.0) v.sign = -v.sign;
    return v;
  }
  bool singular_at(const Point& x0) const override { return c_ != 0.0 && f_->singular_at(x0); }
  std::string describe() const override {
    std::ostringstream s;
    s << c_ << " * (" << f_->describe() << ")";
    return s.str();
  }

 private:
  std::shared_ptr<const FieldNode> f_;
  double c_;
};

class Absolute final : public FieldNode {
 public:
  explicit Absolute(std::shared_ptr<const FieldNode> f) : f_(std::move(f)) {}
  double eval(const Point& y) const override { return std::abs(f_->eval(y)); }
  bool radial_about(const Point& x0) const override { return f_->radial_about(x0); }
  LogValue radial(double L) const override {
    LogValue v = f_->radial(L);
    v.sign = std::abs(v.sign);
    return v;
  }
  bool singular_at(const Point& x0) const override { return f_->singular_at(x0); }
  std::string describe() const override { return "|" + f_->describe() + "|"; }

 private:
  std::shared_ptr<const FieldNode> f_;
};

class Sum final : public FieldNode {
 public:
  Sum(std::shared_ptr<const FieldNode> a, std::shared_ptr<const FieldNode> b)
      : a_(std::move(a)), b_(std::move(b)) {}
  double eval(const Point& y) const override { return a_->eval(y) + b_->eval(y); }
  bool radial_about(const Point& x0) const override {
    return a_->radial_about(x0) && b_->radial_about(x0);
  }
  LogValue radial(double L) const override {
    LogValue u = a_->radial(L), v = b_->radial(L);
    if (u.sign == 0) return v;
    if (v.sign == 0) return u;
    if (u.log_abs < v.log_abs) std::swap(u, v);
    double t = std::exp(v.log_abs - u.log_abs) * u.sign * v.sign;
    double m = 1.0 + t;
    if (m == 0.0) return {kNegInf, 0};
    return {u.log_abs + std::log(std::abs(m)), m > 0 ? u.sign : -u.sign};
  }
  bool singular_at(const Point& x0) const override {
    return a_->singular_at(x0) || b_->singular_at(x0);
  }
  std::string describe() const override {
    return "(" + a_->describe() + ") + (" + b_->describe() + ")";
  }

 private:
  std::shared_ptr<const FieldNode> a_, b_;
};

}  // namespace

ScalarField::ScalarField() : node_(std::make_shared<Constant>(0.0)) {}

ScalarField ScalarField::constant(double c) { return ScalarField(std::make_shared<Constant>(c)); }

ScalarField ScalarField::power(const Point& x0, double s) {
  return ScalarField(std::make_shared<PowerFamily>(x0, s, 0.0, 1.0, false, 1.0));
}

ScalarField ScalarField::power_log(const Point& x0, double s, double m, double A) {
  return ScalarField(std::make_shared<PowerFamily>(x0, s, m, A, false, 1.0));
}

ScalarField ScalarField::power_loglog(const Point& x0, double s, double B) {
  return ScalarField(std::make_shared<PowerFamily>(x0, s, 0.0, 1.0, true, B));
}

ScalarField ScalarField::ball_indicator(const Point& c, double r) {
  return ScalarField(std::make_shared<AnnulusIndicator>(c, 0.0, r));
}

ScalarField ScalarField::annulus_indicator(const Point& c, double a, double b) {
  return ScalarField(std::make_shared<AnnulusIndicator>(c, a, b));
}

ScalarField ScalarField::coordinate(int j) { return ScalarField(std::make_shared<Coordinate>(j)); }

ScalarField ScalarField::oscillating_power(const Point& x0, double s, double freq) {
  return ScalarField(std::make_shared<Oscillating>(x0, s, freq));
}

ScalarField ScalarField::random_smooth(const Point& x0, int n, double ell, double s,
                                       std::uint64_t seed, int modes) {
  return ScalarField(std::make_shared<RandomSmooth>(x0, n, ell, s, seed, modes));
}

ScalarField ScalarField::scaled(double c) const {
  return ScalarField(std::make_shared<Scaled>(node_, c));
}

ScalarField ScalarField::absolute() const { return ScalarField(std::make_shared<Absolute>(node_)); }

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(std::make_shared<Sum>(a.node_, b.node_));
}

}  // namespace cmorrey
