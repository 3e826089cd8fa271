#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cmorrey/exponents.hpp"
#include "cmorrey/fields.hpp"
#include "cmorrey/geometry.hpp"

namespace cmorrey {

// K(x, y) = Omega0((x-y)/|x-y|) |x-y|^-n with Omega0 odd on the sphere.
struct KernelSpec {
  enum class Kind { riesz_transform, odd_homogeneous };
  Kind kind = Kind::riesz_transform;
  int n = 2;
  int j = 1;  // 1-based component
  std::function<double(const Point&)> omega0;

  // (x-y)_j / |x-y|^{n+1}
  static KernelSpec riesz_transform(int n, int j);
  // The caller guarantees that omega0 is odd and smooth.
  static KernelSpec odd_homogeneous(int n, std::function<double(const Point&)> omega0);

  double omega(const Point& theta) const;
  double operator()(const Point& x, const Point& y) const;
};

// Quadrature used around a single probe point z, with d = |z - x0|:
//  - B(x0, d/2) in polar coordinates about x0, refined toward x0;
//  - the rest of the domain in polar coordinates about z, with the directions
//    that cross B(x0, d/2) handled by a separate angular rule;
//  - a ball about z integrated with antipodal ray pairs (principal values).
struct ProbeOptions {
  RadialRule radial = RadialRule::k7;
  int angular_2d = 32;
  int angular_3d = 12;
  int depth_x0 = 16;  // octaves resolved below d/2 around x0
  int depth_z = 8;    // octaves resolved below the pair radius around z
};

struct OperatorValue {
  double value = 0.0;
  double error = 0.0;
  // Radius of a ball about x0 whose contribution is dropped (0 when resolved).
  double truncation_radius = 0.0;
};

struct SingularValue {
  double value = 0.0;  // extrapolated limit; NaN when withheld
  double error = 0.0;
  bool converged = true;
  std::vector<double> epsilons;
  std::vector<double> truncated;   // T_eps f(x)
  std::vector<double> increments;  // T_{eps_{i+1}} - T_{eps_i}
};

// sup_r |B(x,r)|^{-1} int_{B~(x,r)} |f|, on a ladder anchored at x reaching diam.
OperatorValue maximal(const ScalarField& f, const DomainSpec& dom, const Point& x, const ProbeOptions& opt = {});
// sup_r |B(x,r)|^{alpha(x)/n - 1} int_{B~(x,r)} |f|
OperatorValue fractional_maximal(const ScalarField& f, const ExponentField& alpha, const DomainSpec& dom,
                                 const Point& x, const ProbeOptions& opt = {});
// int f(y) |x-y|^{alpha(x)-n} dy
OperatorValue riesz_potential(const ScalarField& f, const ExponentField& alpha, const DomainSpec& dom,
                              const Point& x, const ProbeOptions& opt = {});
// Truncations T_eps over `epsilons` (a default half-octave ladder when empty)
// and the limit eps -> 0.
SingularValue singular(const ScalarField& f, const KernelSpec& kernel, const DomainSpec& dom, const Point& x,
                       std::span<const double> epsilons = {}, const ProbeOptions& opt = {});

enum class OperatorKind { maximal, fractional, potential, singular };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::maximal;
  std::optional<ExponentField> alpha;  // fractional and potential
  KernelSpec kernel;                   // singular

  static OperatorSpec maximal_op() { return {}; }
  static OperatorSpec fractional(ExponentField a) { return {OperatorKind::fractional, std::move(a), {}}; }
  static OperatorSpec potential(ExponentField a) { return {OperatorKind::potential, std::move(a), {}}; }
  static OperatorSpec singular_op(KernelSpec k) { return {OperatorKind::singular, std::nullopt, std::move(k)}; }
};

const char* to_string(OperatorKind k);

// op(f_i) at every target point, for each field; probe quadratures are shared
// between fields. A singular value whose epsilon sequence does not converge is NaN.
std::vector<SampledField> apply_operator(const OperatorSpec& op, std::span<const ScalarField> fields,
                                         const DomainSpec& dom, std::span<const Point> targets,
                                         const ProbeOptions& opt = {});

namespace reference {
std::vector<SampledField> apply_operator(const OperatorSpec& op, std::span<const ScalarField> fields,
                                         const DomainSpec& dom, std::span<const Point> targets,
                                         const ProbeOptions& opt = {});
}  // namespace reference

struct TripleCheck {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_lower_ratio = 0.0;  // min |z-y| / |x0-z|
  double max_upper_ratio = 0.0;  // max |z-y| / |x0-z|
};

// Samples z outside B~(x0, 2t) and y in B~(x0, t) and checks
// |x0-z|/2 <= |z-y| <= 3|x0-z|/2.
TripleCheck check_exterior_kernel_bound(const DomainSpec& dom, double t, int samples, std::uint64_t seed = 1);

struct LemmaSides {
  double t = 0.0;
  double lhs = 0.0;  // int_{B~(x0,t)} |y-x0|^gamma |f(y)| dy
  double rhs = 0.0;  // int_0^t s^{gamma + n/p'(x0) - 1} ||f||_{L^p(Omega \ B~(x0,s))} ds
};

// Both sides of the local integral estimate on the ladder radii of a full grid.
std::vector<LemmaSides> local_integral_estimate(const ScalarField& f, const ExponentField& p, double gamma,
                                                const QuadratureGrid& grid);

}  // namespace cmorrey
