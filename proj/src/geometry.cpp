#include "cmorrey/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmorrey/fields.hpp"
#include "cmorrey/quadrature.hpp"

namespace cmorrey {

namespace {

void clear_unused(Point& p, int n) {
  for (int d = n; d < 3; ++d) p[d] = 0.0;
}

void check_dimension(int n) {
  if (n < 1 || n > 3) throw DomainError("dimension must be 1, 2 or 3");
}

// Panels on [lo, hi] graded geometrically toward foot with scale h.
std::vector<double> graded_edges(double lo, double hi, double foot, double h, int refine) {
  foot = std::clamp(foot, lo, hi);
  std::vector<double> e{lo, hi, foot};
  for (double s = h; foot - s > lo; s *= 2.0) e.push_back(foot - s);
  for (double s = h; foot + s < hi; s *= 2.0) e.push_back(foot + s);
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    for (int k = 0; k < refine; ++k) out.push_back(e[i] + (e[i + 1] - e[i]) * k / refine);
  }
  out.push_back(e.back());
  return out;
}

struct Nodes1D {
  std::vector<double> x, w, wg;
};

Nodes1D panel_nodes(const std::vector<double>& edges, const KronrodRule& rule) {
  Nodes1D out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double half = 0.5 * (edges[i + 1] - edges[i]);
    double mid = 0.5 * (edges[i + 1] + edges[i]);
    if (half <= 0.0) continue;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      out.x.push_back(mid + half * rule.x[j]);
      out.w.push_back(half * rule.w[j]);
      out.wg.push_back(half * rule.w_gauss[j]);
    }
  }
  return out;
}

std::vector<Ray> box_face_rays(const DomainSpec& dom, const Point& c, int refine) {
  const int n = dom.n;
  std::vector<Ray> rays;
  if (n == 1) {
    for (double s : {1.0, -1.0}) {
      Ray r;
      r.dir = {s, 0.0, 0.0};
      r.weight = r.weight_coarse = 1.0;
      r.exit = dom.exit_distance(c, r.dir);
      rays.push_back(r);
    }
    return rays;
  }
  const KronrodRule& rule = n == 2 ? kronrod15() : kronrod7();
  for (int j = 0; j < n; ++j) {
    for (int side = 0; side < 2; ++side) {
      double F = side == 0 ? dom.lo[j] : dom.hi[j];
      double h = std::abs(F - c[j]);
      if (h <= 0.0) continue;
      std::vector<int> other;
      for (int d = 0; d < n; ++d)
        if (d != j) other.push_back(d);
      std::vector<Nodes1D> axes;
      for (int d : other)
        axes.push_back(panel_nodes(graded_edges(dom.lo[d], dom.hi[d], c[d], h, refine), rule));
      std::size_t n0 = axes[0].x.size();
      std::size_t n1 = n == 3 ? axes[1].x.size() : 1;
      for (std::size_t a = 0; a < n0; ++a) {
        for (std::size_t b = 0; b < n1; ++b) {
          Point P = c;
          P[j] = F;
          P[other[0]] = axes[0].x[a];
          double w = axes[0].w[a], wg = axes[0].wg[a];
          if (n == 3) {
            P[other[1]] = axes[1].x[b];
            w *= axes[1].w[b];
            wg *= axes[1].wg[b];
          }
          Point d = P - c;
          double D = norm(d);
          double jac = h / std::pow(D, n);
          Ray r;
          r.dir = (1.0 / D) * d;
          r.weight = w * jac;
          r.weight_coarse = wg * jac;
          r.exit = D;
          rays.push_back(r);
        }
      }
    }
  }
  return rays;
}

}  // namespace

DomainSpec DomainSpec::ball(int n, Point center, double radius, Point x0) {
  check_dimension(n);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  DomainSpec d;
  d.shape = Shape::ball;
  d.n = n;
  clear_unused(center, n);
  clear_unused(x0, n);
  d.center = center;
  d.radius = radius;
  d.x0 = x0;
  d.ell = 2.0 * radius;
  if (!(d.boundary_distance(x0) > 0.0)) throw DomainError("x0 must lie strictly inside the ball");
  return d;
}

DomainSpec DomainSpec::box(int n, Point lo, Point hi, Point x0) {
  check_dimension(n);
  clear_unused(lo, n);
  clear_unused(hi, n);
  clear_unused(x0, n);
  double diag2 = 0.0;
  for (int k = 0; k < n; ++k) {
    if (!(hi[k] > lo[k])) throw DomainError("box corners must satisfy lo < hi");
    diag2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  }
  DomainSpec d;
  d.shape = Shape::box;
  d.n = n;
  d.lo = lo;
  d.hi = hi;
  d.x0 = x0;
  d.ell = std::sqrt(diag2);
  if (!(d.boundary_distance(x0) > 0.0)) throw DomainError("x0 must lie strictly inside the box");
  return d;
}

bool DomainSpec::contains(const Point& y) const { return boundary_distance(y) > 0.0; }

double DomainSpec::volume() const {
  if (shape == Shape::ball) return unit_ball_volume(n) * std::pow(radius, n);
  double v = 1.0;
  for (int k = 0; k < n; ++k) v *= hi[k] - lo[k];
  return v;
}

double DomainSpec::boundary_distance(const Point& y) const {
  if (shape == Shape::ball) return radius - distance(y, center);
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) d = std::min({d, y[k] - lo[k], hi[k] - y[k]});
  return d;
}

double DomainSpec::exit_distance(const Point& c, const Point& u) const {
  if (shape == Shape::ball) {
    Point q = c - center;
    double b = dot(u, q);
    double disc = b * b - (dot(q, q) - radius * radius);
    return std::max(0.0, -b + std::sqrt(std::max(0.0, disc)));
  }
  double t = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    if (u[k] > 0.0) t = std::min(t, (hi[k] - c[k]) / u[k]);
    if (u[k] < 0.0) t = std::min(t, (lo[k] - c[k]) / u[k]);
  }
  return std::max(0.0, t);
}

double DomainSpec::max_distance_from(const Point& c) const {
  if (shape == Shape::ball) return distance(c, center) + radius;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    double m = std::max(std::abs(c[k] - lo[k]), std::abs(hi[k] - c[k]));
    s += m * m;
  }
  return std::sqrt(s);
}

double RadialLadder::radius(int k) const { return std::ldexp(ell, -k); }

std::vector<double> RadialLadder::radii() const {
  std::vector<double> r(depth + 1);
  for (int k = 0; k <= depth; ++k) r[k] = radius(k);
  return r;
}

// Orthonormal completion of a unit vector in R^3.
void orthonormal_frame(const Point& a, Point& e1, Point& e2) {
  int i = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(a[k]) < std::abs(a[i])) i = k;
  Point h{};
  h[i] = 1.0;
  Point t = h - dot(h, a) * a;
  e1 = (1.0 / norm(t)) * t;
  e2 = {a[1] * e1[2] - a[2] * e1[1], a[2] * e1[0] - a[0] * e1[2], a[0] * e1[1] - a[1] * e1[0]};
}

std::vector<Ray> sphere_rays(int n, int m, const Point& axis) {
  check_dimension(n);
  Point a = (1.0 / norm(axis)) * axis;
  std::vector<Ray> rays;
  if (n == 1) {
    Point e{a[0] >= 0.0 ? 1.0 : -1.0, 0.0, 0.0};
    for (double s : {1.0, -1.0}) {
      Ray r;
      r.dir = s * e;
      r.weight = r.weight_coarse = 1.0;
      rays.push_back(r);
    }
    return rays;
  }
  if (m < 2 || m % 2 != 0) throw DomainError("angular resolution must be even");
  const double h = 2.0 * std::numbers::pi / m;
  if (n == 2) {
    Point perp{-a[1], a[0], 0.0};
    for (int j = 0; j < m; ++j) {
      double t = (j + 0.5) * h;
      Ray r;
      r.dir = std::cos(t) * a + std::sin(t) * perp;
      r.weight = h;
      r.weight_coarse = j % 2 == 0 ? 2.0 * h : 0.0;
      rays.push_back(r);
    }
    return rays;
  }
  Point e1, e2;
  orthonormal_frame(a, e1, e2);
  const GaussRule& g = gauss_legendre(std::max(1, m / 2));
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    double mu = g.x[i];
    double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    for (int j = 0; j < m; ++j) {
      double t = (j + 0.5) * h;
      Ray r;
      r.dir = mu * a + (s * std::cos(t)) * e1 + (s * std::sin(t)) * e2;
      r.weight = g.w[i] * h;
      r.weight_coarse = j % 2 == 0 ? 2.0 * g.w[i] * h : 0.0;
      rays.push_back(r);
    }
  }
  return rays;
}

std::vector<Ray> domain_rays(const DomainSpec& dom, const Point& c, int m, int refine) {
  if (dom.shape == Shape::box) return box_face_rays(dom, c, std::max(1, refine));
  std::vector<Ray> rays = sphere_rays(dom.n, m, Point{1.0, 0.0, 0.0});
  for (auto& r : rays) r.exit = dom.exit_distance(c, r.dir);
  return rays;
}

QuadratureGrid::QuadratureGrid(const DomainSpec& dom, const Point& center, const GridOptions& opt)
    : dom_(dom), opt_(opt), center_(center), depth_(opt.depth) {
  if (opt.depth < 1 || opt.depth > 60) throw DomainError("ladder depth must be in 1..60");
  if (!(opt.r_in >= 0.0) || !(opt.r_out > opt.r_in)) throw DomainError("invalid annulus radii");
  const int n = dom.n;
  r_min_ = std::ldexp(dom.ell, -depth_);
  rays_ = domain_rays(dom, center, opt.angular, std::max(1, opt.angular / 64));
  full_ = opt.r_in == 0.0 && std::isinf(opt.r_out);
  has_core_ = opt.r_in == 0.0;

  std::vector<double> edges;
  if (full_) {
    for (int k = 0; k <= depth_; ++k) edges.push_back(std::ldexp(dom.ell, -k));
  } else {
    double max_exit = 0.0;
    for (const auto& r : rays_) max_exit = std::max(max_exit, r.exit);
    double top = std::min(opt.r_out, max_exit);
    double bottom = opt.r_in > 0.0 ? opt.r_in : r_min_;
    if (top > bottom) {
      edges.push_back(top);
      for (int k = 0; k < 2000; ++k) {
        double e = std::ldexp(dom.ell, -k);
        if (e <= bottom) break;
        if (e < top) edges.push_back(e);
      }
      edges.push_back(bottom);
    }
  }

  const KronrodRule& rule = opt.radial == RadialRule::k15 ? kronrod15() : kronrod7();
  band_start_.push_back(0);
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    double outer = edges[b], inner = edges[b + 1];
    band_outer_.push_back(outer);
    band_inner_.push_back(inner);
    for (const auto& ray : rays_) {
      double hi = std::min(outer, ray.exit);
      if (!(hi > inner)) continue;
      double half = 0.5 * (hi - inner), mid = 0.5 * (hi + inner);
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double rho = mid + half * rule.x[i];
        double jac = std::pow(rho, n - 1) * half;
        nodes_.push_back(along(center, rho, ray.dir));
        radius_.push_back(rho);
        weights_.push_back(ray.weight * jac * rule.w[i]);
        weights_coarse_.push_back(ray.weight_coarse * jac * rule.w_gauss[i]);
      }
    }
    band_start_.push_back(nodes_.size());
  }
}

std::size_t QuadratureGrid::exterior_end(int k) const {
  if (!full_) throw DomainError("exterior_end needs a full grid");
  if (k < 0 || k > depth_) throw DomainError("ladder index out of range");
  return band_start_[k];
}

double truncated_ball_measure(const DomainSpec& dom, const Point& x, double r) {
  if (!(r > 0.0)) throw DomainError("truncated_ball_measure: r must be positive");
  const int n = dom.n;
  if (dom.boundary_distance(x) >= r) return unit_ball_volume(n) * std::pow(r, n);
  int m = n == 2 ? 4096 : 128;
  std::vector<Ray> rays = domain_rays(dom, x, m, 16);
  std::vector<double> terms;
  terms.reserve(rays.size());
  for (const auto& ray : rays) terms.push_back(ray.weight * std::pow(std::min(r, ray.exit), n) / n);
  return pairwise_sum(terms);
}

Estimate integrate_annulus(const DomainSpec& dom, const ScalarField& f, double r_in, double r_out,
                           const GridOptions& opt) {
  if (!(r_in >= 0.0) || !(r_out >= r_in)) throw DomainError("integrate_annulus: need 0 <= r_in <= r_out");
  Estimate est;
  if (r_out == r_in) return est;
  GridOptions o = opt;
  o.r_in = r_in;
  o.r_out = r_out;
  QuadratureGrid grid(dom, dom.x0, o);
  std::vector<double> fine(grid.size()), coarse(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = f(grid.nodes()[i]);
    if (!std::isfinite(v)) throw SingularityError("integrate_annulus: non-finite integrand at a node");
    fine[i] = v * grid.weights()[i];
    coarse[i] = v * grid.weights_coarse()[i];
  }
  est.value = pairwise_sum(fine);
  est.error = std::abs(est.value - pairwise_sum(coarse));
  if (grid.has_core()) {
    double rm = grid.r_min();
    if (f.radial_about(dom.x0) && dom.delta() > rm) {
      const int n = dom.n;
      double Lhi = std::log(rm);
      LogValue top = f.radial(Lhi);
      auto h = [&](double L) { return f.radial(L).log_abs + n * L; };
      LogRadialIntegral core = integrate_log_radial(h, Lhi, -std::numeric_limits<double>::infinity());
      est.value += top.sign * sphere_surface_measure(n) * core.value;
      est.truncation_radius = 0.0;
    } else {
      est.truncation_radius = rm;
    }
  }
  return est;
}

}  // namespace cmorrey
