#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cmorrey/point.hpp"

namespace cmorrey {

class ScalarField;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Shape { ball, box };

// Bounded open domain with a marked interior point x0.
struct DomainSpec {
  Shape shape = Shape::ball;
  int n = 2;
  Point center{};  // ball
  double radius = 1.0;
  Point lo{};  // box
  Point hi{};
  Point x0{};
  double ell = 2.0;

  static DomainSpec ball(int n, Point center, double radius, Point x0);
  static DomainSpec box(int n, Point lo, Point hi, Point x0);

  bool contains(const Point& y) const;
  double volume() const;
  double boundary_distance(const Point& y) const;
  double delta() const { return boundary_distance(x0); }
  // Length of the segment {c + t u : 0 <= t < R} inside the closure, for c in the closure.
  double exit_distance(const Point& c, const Point& u) const;
  double max_distance_from(const Point& c) const;
};

struct RadialLadder {
  double ell = 1.0;
  int depth = 24;

  double radius(int k) const;
  std::vector<double> radii() const;
};

struct Ray {
  Point dir{};
  double weight = 0.0;
  double weight_coarse = 0.0;
  double exit = 0.0;
};

// e1, e2 completing the unit vector a to an orthonormal basis of R^3.
void orthonormal_frame(const Point& a, Point& e1, Point& e2);

// Full-sphere direction rule about `axis`: n=1 gives +-axis, n=2 a uniform rule
// with m angles, n=3 Gauss in cos(psi) (m/2 nodes) times m uniform azimuths.
// Every direction u has its antipode -u in the set (m even).
std::vector<Ray> sphere_rays(int n, int m, const Point& axis);

// Directions from c covering the domain with exit distances. Balls use the sphere
// rule; boxes use a decomposition of the solid angle over the faces.
std::vector<Ray> domain_rays(const DomainSpec& dom, const Point& c, int m, int refine = 1);

enum class RadialRule { k7, k15 };

struct GridOptions {
  int depth = 24;
  RadialRule radial = RadialRule::k15;
  int angular = 64;
  double r_in = 0.0;
  double r_out = std::numeric_limits<double>::infinity();
};

// Polar grid centered at `center` with dyadic radial bands r_k = ell 2^-k.
// Nodes are stored band by band from the outside in, so the region
// {|y - center| > r_k} is the prefix [0, band_start[k]) of a full grid.
class QuadratureGrid {
 public:
  QuadratureGrid(const DomainSpec& dom, const Point& center, const GridOptions& opt);
  QuadratureGrid(const DomainSpec& dom, const GridOptions& opt) : QuadratureGrid(dom, dom.x0, opt) {}

  const DomainSpec& domain() const { return dom_; }
  const Point& center() const { return center_; }
  int depth() const { return depth_; }
  double r_min() const { return r_min_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& weights_coarse() const { return weights_coarse_; }
  const std::vector<double>& radius() const { return radius_; }
  const std::vector<Ray>& rays() const { return rays_; }
  std::size_t bands() const { return band_outer_.size(); }
  std::size_t band_start(std::size_t b) const { return band_start_[b]; }
  double band_outer(std::size_t b) const { return band_outer_[b]; }
  double band_inner(std::size_t b) const { return band_inner_[b]; }
  // True when the region reaches the center; the ball B(center, r_min) is then
  // left to the caller (closed-form radial rule or reported truncation).
  bool has_core() const { return has_core_; }
  bool full() const { return full_; }
  // Prefix end for the exterior of ladder radius r_k (full grids only).
  std::size_t exterior_end(int k) const;
  RadialLadder ladder() const { return {dom_.ell, depth_}; }
  const GridOptions& options() const { return opt_; }

 private:
  DomainSpec dom_;
  GridOptions opt_;
  Point center_;
  int depth_;
  double r_min_;
  bool has_core_ = false;
  bool full_ = false;
  std::vector<Point> nodes_;
  std::vector<double> weights_, weights_coarse_, radius_;
  std::vector<std::size_t> band_start_;
  std::vector<double> band_outer_, band_inner_;
  std::vector<Ray> rays_;
};

double truncated_ball_measure(const DomainSpec& dom, const Point& x, double r);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
  double truncation_radius = 0.0;
};

Estimate integrate_annulus(const DomainSpec& dom, const ScalarField& f, double r_in, double r_out,
                           const GridOptions& opt = {});

}  // namespace cmorrey
