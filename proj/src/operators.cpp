#include "cmorrey/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cmorrey/kernels.hpp"
#include "cmorrey/norms.hpp"
#include "cmorrey/quadrature.hpp"

namespace cmorrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
// Half-angle of B(x0, d/2) seen from a point at distance d.
constexpr double kBeta = kPi / 6.0;

struct Dir {
  Point u{};
  double w = 0.0;
  bool cap = false;
  double c1 = 0.0, c2 = 0.0;  // entry/exit of B(x0, d/2) along u, in units of d
};

int angular_count(int n, const ProbeOptions& o) { return n == 2 ? o.angular_2d : n == 3 ? o.angular_3d : 2; }

Dir cap_dir(const Point& u, double w, double sin_theta, double cos_phi) {
  double c = std::sqrt(1.0 - sin_theta * sin_theta);
  double h = std::sin(kBeta) * std::abs(cos_phi);
  return {u, w, true, c - h, c + h};
}

// Directions about `a` split at the cone of half-angle beta around a. Inside the
// cone the substitution sin(theta) = sin(beta) sin(phi) removes the square-root
// behaviour of the entry and exit distances at the tangent directions.
std::vector<Dir> split_dirs(int n, int m, const Point& a) {
  std::vector<Dir> dirs;
  const double sb = std::sin(kBeta);
  if (n == 1) {
    dirs.push_back(cap_dir(a, 1.0, 0.0, 1.0));
    dirs.push_back({-1.0 * a, 1.0, false, 0.0, 0.0});
    return dirs;
  }
  if (n == 2) {
    Point b{-a[1], a[0], 0.0};
    const GaussRule& gc = gauss_legendre(m / 2);
    for (std::size_t i = 0; i < gc.x.size(); ++i) {
      double phi = 0.5 * kPi * gc.x[i];
      double st = sb * std::sin(phi), th = std::asin(st);
      double w = 0.5 * kPi * gc.w[i] * sb * std::cos(phi) / std::cos(th);
      dirs.push_back(cap_dir(std::cos(th) * a + std::sin(th) * b, w, st, std::cos(phi)));
    }
    const GaussRule& go = gauss_legendre(m);
    for (std::size_t i = 0; i < go.x.size(); ++i) {
      double th = kPi + (kPi - kBeta) * go.x[i];
      dirs.push_back({std::cos(th) * a + std::sin(th) * b, (kPi - kBeta) * go.w[i], false, 0.0, 0.0});
    }
    return dirs;
  }
  Point e1, e2;
  orthonormal_frame(a, e1, e2);
  const double h = 2.0 * kPi / m;
  const GaussRule& gc = gauss_legendre(std::max(1, m / 2));
  const GaussRule& go = gauss_legendre(m);
  for (int j = 0; j < m; ++j) {
    double az = (j + 0.5) * h;
    Point v = std::cos(az) * e1 + std::sin(az) * e2;
    for (std::size_t i = 0; i < gc.x.size(); ++i) {
      double psi = 0.25 * kPi * (gc.x[i] + 1.0);
      double st = sb * std::sin(psi), th = std::asin(st);
      double w = h * 0.25 * kPi * gc.w[i] * sb * std::cos(psi) / std::cos(th) * st;
      dirs.push_back(cap_dir(std::cos(th) * a + st * v, w, st, std::cos(psi)));
    }
    for (std::size_t i = 0; i < go.x.size(); ++i) {
      double th = kBeta + 0.5 * (kPi - kBeta) * (go.x[i] + 1.0);
      double w = h * 0.5 * (kPi - kBeta) * go.w[i] * std::sin(th);
      dirs.push_back({std::cos(th) * a + std::sin(th) * v, w, false, 0.0, 0.0});
    }
  }
  return dirs;
}

// Point-symmetric directions, returned as antipodal pairs (u, -u) sharing a weight.
std::vector<Dir> paired_dirs(int n, int m, const Point& a) {
  std::vector<Ray> rays = sphere_rays(n, m, a);
  std::vector<Dir> out;
  std::vector<bool> used(rays.size(), false);
  for (std::size_t i = 0; i < rays.size(); ++i) {
    if (used[i]) continue;
    for (std::size_t k = i + 1; k < rays.size(); ++k) {
      if (!used[k] && distance(rays[k].dir, -1.0 * rays[i].dir) < 1e-12) {
        used[i] = used[k] = true;
        out.push_back({rays[i].dir, rays[i].weight, false, 0.0, 0.0});
        break;
      }
    }
    if (!used[i]) throw DomainError("direction rule is not point symmetric");
  }
  return out;
}

struct Node {
  Point y{};
  double w = 0.0, wc = 0.0;
  double rho = 0.0;  // distance to the probe point
  int bucket = 0;
  Point u{};  // direction from the probe point (z-polar nodes)
};

struct Ring {
  double r = 0.0, w = 0.0, wc = 0.0;
};

// Radial panel of one ray: nodes [first, first + rule size) of the b or pair list.
struct Piece {
  std::size_t first = 0;
  double lo = 0.0, hi = 0.0;
  bool pair = false;
};

struct Probe {
  const KronrodRule* rule = nullptr;
  std::vector<std::vector<Piece>> pieces;  // by ladder index of the panel's outer edge
  Point z{}, x0{};
  int n = 2;
  double d = 0.0;
  double rho_s = 0.0, rho_min = 0.0;
  double r_a = 0.0;  // core ball about x0 below the x0-polar part
  bool rings_ok = false;
  std::vector<Node> a;  // x0-polar, sorted by distance to z
  std::vector<Ring> rings;
  std::vector<Node> b;      // z-polar outside the pair ball
  std::vector<Node> pairs;  // y = z + rho u, partner z - rho u
  std::vector<double> ladder;  // r_m = rho_s 2^{m/2}, index i <-> m = i + m_lo
  int m_lo = 0;

  double radius(int m) const { return ladder[m - m_lo]; }
};

void add_piece(std::vector<Node>& out, const Point& z, const Dir& dir, double lo, double hi, int bucket, int n,
               const KronrodRule& rule) {
  double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    double rho = mid + half * rule.x[i];
    double jac = std::pow(rho, n - 1) * half;
    Node nd;
    nd.y = along(z, rho, dir.u);
    nd.w = dir.w * jac * rule.w[i];
    nd.wc = dir.w * jac * rule.w_gauss[i];
    nd.rho = rho;
    nd.bucket = bucket;
    nd.u = dir.u;
    out.push_back(nd);
  }
}

Probe build_probe(const DomainSpec& dom, const Point& z, const ProbeOptions& opt) {
  if (!dom.contains(z)) throw DomainError("probe point outside the domain");
  Probe P;
  P.z = z;
  P.x0 = dom.x0;
  P.n = dom.n;
  P.d = distance(z, dom.x0);
  const int n = dom.n;
  const int m = angular_count(n, opt);
  const KronrodRule& rule = opt.radial == RadialRule::k15 ? kronrod15() : kronrod7();
  P.rule = &rule;
  const double dz = dom.boundary_distance(z);
  const Point axis = P.d > 0.0 ? (1.0 / P.d) * (dom.x0 - z) : Point{1.0, 0.0, 0.0};
  P.rho_s = P.d > 0.0 ? std::min(0.5 * P.d, dz) : dz;
  P.m_lo = -2 * opt.depth_z;
  const double top = dom.max_distance_from(z);
  for (int k = P.m_lo;; ++k) {
    double r = P.rho_s * std::exp2(0.5 * k);
    P.ladder.push_back(r);
    if (r >= top * (1.0 + 1e-9)) break;
  }
  P.rho_min = P.ladder.front();
  P.pieces.resize(P.ladder.size());
  auto piece = [&](std::vector<Node>& list, const Dir& dir, double lo, double hi, int k, bool pair) {
    P.pieces[k - P.m_lo].push_back({list.size(), lo, hi, pair});
    add_piece(list, z, dir, lo, hi, k, n, rule);
  };

  // Pair ball B(z, rho_s).
  for (const Dir& dir : paired_dirs(n, m, axis)) {
    for (int k = 0; k > P.m_lo; --k) piece(P.pairs, dir, P.radius(k - 1), P.radius(k), k, true);
  }

  // Rest of the domain about z, minus B(x0, d/2).
  std::vector<Dir> dirs = P.d > 0.0 ? split_dirs(n, m, axis) : paired_dirs(n, m, axis);
  if (P.d == 0.0) {
    std::size_t cnt = dirs.size();
    for (std::size_t i = 0; i < cnt; ++i) dirs.push_back({-1.0 * dirs[i].u, dirs[i].w, false, 0.0, 0.0});
  }
  for (const Dir& dir : dirs) {
    double exit = dom.exit_distance(z, dir.u);
    std::vector<std::pair<double, double>> segs;
    if (dir.cap) {
      double t1 = dir.c1 * P.d, t2 = dir.c2 * P.d;
      segs.push_back({P.rho_s, std::min(t1, exit)});
      if (t2 < exit) segs.push_back({t2, exit});
    } else {
      segs.push_back({P.rho_s, exit});
    }
    for (auto [lo, hi] : segs) {
      if (!(hi > lo)) continue;
      int k = 1;
      while (P.radius(k) <= lo) ++k;
      double a = lo;
      while (a < hi) {
        double b = std::min(hi, P.radius(k));
        if (b > a) piece(P.b, dir, a, b, k, false);
        a = b;
        ++k;
      }
    }
  }

  // B(x0, d/2) in polar coordinates about x0.
  if (P.d > 0.0) {
    const double R = 0.5 * P.d;
    P.r_a = std::ldexp(R, -opt.depth_x0);
    std::vector<Ray> rays = domain_rays(dom, dom.x0, m, std::max(1, m / 64));
    P.rings_ok = true;
    for (const auto& ray : rays) P.rings_ok = P.rings_ok && ray.exit >= R;
    for (int i = 0; i < opt.depth_x0; ++i) {
      double hi = std::ldexp(R, -i), lo = std::ldexp(R, -i - 1);
      double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        double rho = mid + half * rule.x[q];
        P.rings.push_back({rho, std::pow(rho, n - 1) * half * rule.w[q], std::pow(rho, n - 1) * half * rule.w_gauss[q]});
      }
      for (const auto& ray : rays) {
        double h = std::min(hi, ray.exit);
        if (!(h > lo)) continue;
        Dir dir{ray.dir, ray.weight, false, 0.0, 0.0};
        add_piece(P.a, dom.x0, dir, lo, h, 0, n, rule);
      }
    }
    for (auto& nd : P.a) nd.rho = distance(nd.y, z);
    std::stable_sort(P.a.begin(), P.a.end(), [](const Node& l, const Node& r) { return l.rho < r.rho; });
  }
  return P;
}

struct Core {
  double mass = 0.0;  // signed integral of f over the ball
  bool resolved = false;
};

// int_{B(c, r)} f(y) |y-c|^{extra} dy for f radial about c.
Core radial_core(const ScalarField& f, const Point& c, double r, int n, double extra = 0.0) {
  Core k;
  if (!f.radial_about(c)) return k;
  double L = std::log(r);
  int sign = f.radial(L).sign;
  auto h = [&](double t) { return f.radial(t).log_abs + (n + extra) * t; };
  LogRadialIntegral I = integrate_log_radial(h, L, -kInf);
  k.mass = I.divergent ? kInf * (sign < 0 ? -1.0 : 1.0) : sign * sphere_surface_measure(n) * I.value;
  k.resolved = true;
  return k;
}

struct Samples {
  std::vector<double> a, b, plus, minus;
  double fz = 0.0;
};

Samples sample(const Probe& P, const ScalarField& f) {
  Samples s;
  s.a.resize(P.a.size());
  s.b.resize(P.b.size());
  s.plus.resize(P.pairs.size());
  s.minus.resize(P.pairs.size());
  for (std::size_t i = 0; i < P.a.size(); ++i) s.a[i] = f(P.a[i].y);
  for (std::size_t i = 0; i < P.b.size(); ++i) s.b[i] = f(P.b[i].y);
  for (std::size_t i = 0; i < P.pairs.size(); ++i) {
    const Node& nd = P.pairs[i];
    s.plus[i] = f(nd.y);
    s.minus[i] = f(along(P.z, -nd.rho, nd.u));
  }
  s.fz = f(P.z);
  return s;
}

// Fraction of the sphere of radius rho about x0 lying in B(z, r), |z - x0| = d.
double sphere_fraction(int n, double rho, double r, double d) {
  if (n == 1) return 0.5 * ((std::abs(d - rho) < r) + (d + rho < r));
  double c = std::clamp((rho * rho + d * d - r * r) / (2.0 * rho * d), -1.0, 1.0);
  return n == 2 ? std::acos(c) / kPi : 0.5 * (1.0 - c);
}

// W_i = int_{-1}^{tau} l_i(x) dx for the Lagrange basis on the rule's nodes.
std::vector<double> partial_weights(const KronrodRule& rule, double tau) {
  const GaussRule& g = gauss_legendre(rule.x.size());
  const std::size_t m = rule.x.size();
  std::vector<double> W(m, 0.0);
  double half = 0.5 * (tau + 1.0);
  for (std::size_t q = 0; q < g.x.size(); ++q) {
    double x = -1.0 + half * (g.x[q] + 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      double l = 1.0;
      for (std::size_t k = 0; k < m; ++k)
        if (k != i) l *= (x - rule.x[k]) / (rule.x[i] - rule.x[k]);
      W[i] += half * g.w[q] * l;
    }
  }
  return W;
}

OperatorValue eval_maximal(const Probe& P, const ScalarField& f, double alpha) {
  OperatorValue out;
  const int n = P.n;
  const Samples s = sample(P, f);
  const std::size_t L = P.ladder.size();
  std::vector<double> S(L, 0.0), Sc(L, 0.0);
  auto at = [&](int m) { return static_cast<std::size_t>(m - P.m_lo); };
  Core zc;
  if (P.d == 0.0 && f.radial_about(P.z)) {
    zc = radial_core(f, P.z, P.rho_min, n);
    zc.mass = std::abs(zc.mass);
  } else {
    zc.mass = std::abs(s.fz) * unit_ball_volume(n) * std::pow(P.rho_min, n);
  }
  if (!std::isfinite(zc.mass)) {
    out.value = kInf;
    return out;
  }
  S[0] += zc.mass;
  Sc[0] += zc.mass;
  for (std::size_t i = 0; i < P.pairs.size(); ++i) {
    double v = std::abs(s.plus[i]) + std::abs(s.minus[i]);
    S[at(P.pairs[i].bucket)] += P.pairs[i].w * v;
    Sc[at(P.pairs[i].bucket)] += P.pairs[i].wc * v;
  }
  for (std::size_t i = 0; i < P.b.size(); ++i) {
    S[at(P.b[i].bucket)] += P.b[i].w * std::abs(s.b[i]);
    Sc[at(P.b[i].bucket)] += P.b[i].wc * std::abs(s.b[i]);
  }
  for (std::size_t i = 1; i < L; ++i) {
    S[i] += S[i - 1];
    Sc[i] += Sc[i - 1];
  }

  // Part inside B(x0, d/2).
  double acore = 0.0;
  std::vector<double> ring_val;
  std::vector<double> aw, awc;
  const bool exact = P.d > 0.0 && P.rings_ok && f.radial_about(P.x0);
  if (P.d > 0.0) {
    Core c = radial_core(f, P.x0, P.r_a, n);
    if (c.resolved) {
      acore = std::abs(c.mass);
    } else {
      out.truncation_radius = P.r_a;
    }
    if (exact) {
      for (const Ring& g : P.rings) ring_val.push_back(std::exp(f.radial(std::log(g.r)).log_abs));
    } else {
      aw.resize(P.a.size() + 1, 0.0);
      awc.resize(P.a.size() + 1, 0.0);
      for (std::size_t i = 0; i < P.a.size(); ++i) {
        aw[i + 1] = aw[i] + P.a[i].w * std::abs(s.a[i]);
        awc[i + 1] = awc[i] + P.a[i].wc * std::abs(s.a[i]);
      }
    }
  }
  if (!std::isfinite(acore)) {
    out.value = kInf;
    return out;
  }
  // For f radial about x0 the part of B(z, r) inside B(x0, d/2) is split into
  // the full spheres |y - x0| < r - d and the shells cut by the sphere about z,
  // where the cut fraction has square-root ends; a cosine substitution on
  // geometric panels absorbs them.
  const double R_a = 0.5 * P.d;
  const std::size_t K = P.rule->x.size();
  std::vector<double> ring_cum;  // mass of rings strictly inside ring i
  if (exact) {
    const std::size_t nr = P.rings.size() / K;
    ring_cum.assign(nr + 1, 0.0);
    for (std::size_t i = nr; i-- > 0;) {
      double m = 0.0;
      for (std::size_t q = 0; q < K; ++q) m += P.rings[i * K + q].w * ring_val[i * K + q];
      ring_cum[i] = ring_cum[i + 1] + m;
    }
  }
  auto full_spheres = [&](double rho) {
    // int over r_a < |y - x0| < rho, rho <= d/2
    if (rho <= P.r_a) return 0.0;
    const std::size_t nr = ring_cum.size() - 1;
    std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(std::log2(R_a / rho))));
    if (i >= nr) i = nr - 1;
    const double hi = std::ldexp(R_a, -static_cast<int>(i)), lo = 0.5 * hi;
    const double tau = std::clamp((2.0 * rho - lo - hi) / (hi - lo), -1.0, 1.0);
    std::vector<double> W = partial_weights(*P.rule, tau);
    double m = ring_cum[i + 1];
    for (std::size_t q = 0; q < K; ++q) m += P.rings[i * K + q].w / P.rule->w[q] * ring_val[i * K + q] * W[q];
    return sphere_surface_measure(n) * m;
  };
  auto exact_shells = [&](double r, bool coarse) {
    const double S_n = sphere_surface_measure(n);
    double v = 0.0;
    if (r > P.d) v += full_spheres(std::min(r - P.d, R_a));
    const double a = std::max(std::abs(P.d - r), P.r_a), b = std::min(P.d + r, R_a);
    if (!(b > a)) return v;
    const GaussRule& g = gauss_legendre(coarse ? 12 : 24);
    auto panel = [&](double lo, double hi) {
      double sum = 0.0;
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        double th = 0.5 * kPi * (g.x[q] + 1.0);
        double rho = lo + 0.5 * (hi - lo) * (1.0 - std::cos(th));
        double jac = 0.25 * kPi * (hi - lo) * std::sin(th);
        double fv = std::exp(f.radial(std::log(rho)).log_abs);
        sum += g.w[q] * jac * fv * std::pow(rho, n - 1) * sphere_fraction(n, rho, r, P.d);
      }
      return sum;
    };
    for (double lo = a; lo < b;) {
      double hi = std::min(b, std::max(2.0 * lo, lo + 1e-300));
      if (b - hi < 0.25 * (hi - lo)) hi = b;
      v += S_n * panel(lo, hi);
      lo = hi;
    }
    return v;
  };
  auto part_a = [&](double r, bool coarse) {
    if (P.d == 0.0 || r <= 0.5 * P.d) return 0.0;
    double v = r > P.d ? acore : 0.0;
    if (exact) return v + exact_shells(r, coarse);
    auto it = std::lower_bound(P.a.begin(), P.a.end(), r, [](const Node& nd, double x) { return nd.rho < x; });
    std::size_t k = it - P.a.begin();
    return v + (coarse ? awc[k] : aw[k]);
  };

  const double vn = unit_ball_volume(n);
  auto average = [&](double r, double mass) { return std::pow(vn * std::pow(r, n), alpha / n - 1.0) * mass; };
  double best = alpha == 0.0 ? std::abs(s.fz) : 0.0, best_c = best;
  std::vector<double> lv(L);
  for (std::size_t i = 0; i < L; ++i) {
    double r = P.ladder[i];
    lv[i] = average(r, S[i] + part_a(r, false));
    if (lv[i] > best) {
      best = lv[i];
      best_c = average(r, Sc[i] + part_a(r, true));
    }
  }
  // Sub-steps around every ladder radius within rounding of the maximum, so
  // that near-ties do not make the result depend on the scale of f.
  std::vector<char> near(L, 0);
  for (std::size_t i = 0; i < L; ++i) near[i] = best > 0.0 && lv[i] >= best * (1.0 - 1e-9);
  if (std::any_of(near.begin(), near.end(), [](char c) { return c != 0; })) {
    // Sub-steps between the ladder radii next to the best one. Partial panels
    // of the z-polar part integrate the interpolant through the panel nodes.
    const KronrodRule& rule = *P.rule;
    auto partial = [&](std::size_t i, double r) {
      double sum = 0.0;
      for (const Piece& pc : P.pieces[i + 1]) {
        double tau = std::min(1.0, (2.0 * r - pc.lo - pc.hi) / (pc.hi - pc.lo));
        if (tau <= -1.0) continue;
        std::vector<double> W = partial_weights(rule, tau);
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
          std::size_t k = pc.first + q;
          const Node& nd = pc.pair ? P.pairs[k] : P.b[k];
          double v = pc.pair ? std::abs(s.plus[k]) + std::abs(s.minus[k]) : std::abs(s.b[k]);
          sum += nd.w / rule.w[q] * v * W[q];
        }
      }
      return sum;
    };
    constexpr int kSub = 8;
    for (std::size_t i = 0; i + 1 < L; ++i) {
      if (!near[i] && !near[i + 1]) continue;
      for (int q = 1; q < kSub; ++q) {
        double r = P.ladder[i] * std::pow(P.ladder[i + 1] / P.ladder[i], static_cast<double>(q) / kSub);
        double part = partial(i, r);
        double v = average(r, S[i] + part + part_a(r, false));
        if (v > best) {
          best = v;
          best_c = average(r, Sc[i] + part + part_a(r, true));
        }
      }
    }
  }
  out.value = best;
  out.error = std::abs(best - best_c);
  return out;
}

OperatorValue eval_potential(const Probe& P, const ScalarField& f, double alpha) {
  OperatorValue out;
  const int n = P.n;
  const Samples s = sample(P, f);
  std::vector<double> t, tc;
  auto push = [&](double w, double wc, double v) {
    t.push_back(w * v);
    tc.push_back(wc * v);
  };
  for (std::size_t i = 0; i < P.a.size(); ++i) push(P.a[i].w, P.a[i].wc, s.a[i] * std::pow(P.a[i].rho, alpha - n));
  for (std::size_t i = 0; i < P.b.size(); ++i) push(P.b[i].w, P.b[i].wc, s.b[i] * std::pow(P.b[i].rho, alpha - n));
  for (std::size_t i = 0; i < P.pairs.size(); ++i)
    push(P.pairs[i].w, P.pairs[i].wc, (s.plus[i] + s.minus[i]) * std::pow(P.pairs[i].rho, alpha - n));
  double core;
  if (P.d == 0.0 && f.radial_about(P.z)) {
    core = radial_core(f, P.z, P.rho_min, n, alpha - n).mass;
  } else {
    core = s.fz * sphere_surface_measure(n) * std::pow(P.rho_min, alpha) / alpha;
  }
  if (P.d > 0.0) {
    Core c = radial_core(f, P.x0, P.r_a, n);
    if (c.resolved) {
      core += c.mass * std::pow(P.d, alpha - n);
    } else {
      out.truncation_radius = P.r_a;
    }
  }
  double fine = pairwise_sum(t), coarse = pairwise_sum(tc);
  out.value = fine + core;
  out.error = std::abs(fine - coarse);
  return out;
}

SingularValue eval_singular(const Probe& P, const ScalarField& f, const KernelSpec& K,
                            std::span<const double> epsilons) {
  SingularValue out;
  const int n = P.n;
  const Samples s = sample(P, f);
  // Outside the pair ball.
  std::vector<double> t, tc;
  for (std::size_t i = 0; i < P.a.size(); ++i) {
    double v = K(P.z, P.a[i].y) * s.a[i];
    t.push_back(P.a[i].w * v);
    tc.push_back(P.a[i].wc * v);
  }
  for (std::size_t i = 0; i < P.b.size(); ++i) {
    double v = K.omega(-1.0 * P.b[i].u) * std::pow(P.b[i].rho, -n) * s.b[i];
    t.push_back(P.b[i].w * v);
    tc.push_back(P.b[i].wc * v);
  }
  double outer = pairwise_sum(t), outer_c = pairwise_sum(tc);
  if (P.d > 0.0) {
    Core c = radial_core(f, P.x0, P.r_a, n);
    if (c.resolved) {
      double v = c.mass * K(P.z, P.x0);
      outer += v;
      outer_c += v;
    }
  }
  // Pair contributions, K(z, z - rho u) = Omega0(u) rho^-n = -K(z, z + rho u).
  std::vector<double> pv(P.pairs.size());
  for (std::size_t i = 0; i < P.pairs.size(); ++i)
    pv[i] = K.omega(P.pairs[i].u) * std::pow(P.pairs[i].rho, -n) * (s.minus[i] - s.plus[i]);

  auto truncated_at = [&](double eps, bool coarse) {
    std::vector<double> terms;
    if (eps < P.rho_s) {
      terms.push_back(coarse ? outer_c : outer);
      for (std::size_t i = 0; i < P.pairs.size(); ++i)
        if (P.pairs[i].rho > eps) terms.push_back((coarse ? P.pairs[i].wc : P.pairs[i].w) * pv[i]);
    } else {
      for (std::size_t i = 0; i < P.a.size(); ++i)
        if (P.a[i].rho > eps) terms.push_back((coarse ? P.a[i].wc : P.a[i].w) * K(P.z, P.a[i].y) * s.a[i]);
      for (std::size_t i = 0; i < P.b.size(); ++i)
        if (P.b[i].rho > eps)
          terms.push_back((coarse ? P.b[i].wc : P.b[i].w) * K.omega(-1.0 * P.b[i].u) * std::pow(P.b[i].rho, -n) *
                          s.b[i]);
    }
    return pairwise_sum(terms);
  };

  if (epsilons.empty()) {
    // Half-octave ladder from rho_s down to the innermost resolved radius.
    const std::size_t L = static_cast<std::size_t>(-P.m_lo);
    std::vector<double> band(L + 1, 0.0), band_c(L + 1, 0.0);
    for (std::size_t i = 0; i < P.pairs.size(); ++i) {
      std::size_t b = static_cast<std::size_t>(-P.pairs[i].bucket);
      band[b] += P.pairs[i].w * pv[i];
      band_c[b] += P.pairs[i].wc * pv[i];
    }
    double T = outer, Tc = outer_c;
    for (std::size_t k = 0; k <= L; ++k) {
      out.epsilons.push_back(P.radius(-static_cast<int>(k)));
      out.truncated.push_back(T);
      if (k < L) {
        out.increments.push_back(band[k]);
        T += band[k];
        Tc += band_c[k];
      }
    }
    out.error = std::abs(T - Tc);
  } else {
    for (double e : epsilons) {
      if (!(e > 0.0)) throw DomainError("singular: epsilons must be positive");
      out.epsilons.push_back(e);
      out.truncated.push_back(truncated_at(e, false));
    }
    for (std::size_t k = 1; k < out.truncated.size(); ++k)
      out.increments.push_back(out.truncated[k] - out.truncated[k - 1]);
    out.error = std::abs(out.truncated.back() - truncated_at(out.epsilons.back(), true));
  }

  // Convergence: the tail increments must shrink.
  const auto& inc = out.increments;
  double T = out.truncated.back();
  double scale = 0.0;
  for (double v : out.truncated) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-13 * std::max(scale, 1e-300);
  std::size_t m = inc.size();
  bool ok = true;
  for (std::size_t k = m >= 4 ? m - 3 : 1; k < m; ++k)
    if (std::abs(inc[k]) > tiny && std::abs(inc[k]) > std::abs(inc[k - 1]) * (1.0 + 1e-9)) ok = false;
  double tail = 0.0;
  if (ok && m >= 2 && std::abs(inc[m - 1]) > tiny) {
    double q = inc[m - 1] / inc[m - 2];
    if (std::abs(q) < 1.0) {
      tail = inc[m - 1] * q / (1.0 - q);
    } else {
      ok = false;
    }
  }
  out.converged = ok;
  out.value = ok ? T + tail : std::numeric_limits<double>::quiet_NaN();
  out.error += std::abs(tail);
  return out;
}

double alpha_at(const OperatorSpec& op, const Point& z) {
  if (!op.alpha) throw ExponentError("operator needs an order alpha");
  return (*op.alpha)(z);
}

void check_spec(const OperatorSpec& op, const DomainSpec& dom) {
  if (op.kind == OperatorKind::fractional || op.kind == OperatorKind::potential) {
    if (!op.alpha) throw ExponentError("operator needs an order alpha");
    validate_order(*op.alpha, dom);
  }
  if (op.kind == OperatorKind::singular && op.kernel.n != dom.n)
    throw DomainError("kernel dimension does not match the domain");
}

void evaluate_probe(const OperatorSpec& op, std::span<const ScalarField> fields, const DomainSpec& dom,
                    const Point& z, const ProbeOptions& opt, std::vector<SampledField>& out, std::size_t idx) {
  Probe P = build_probe(dom, z, opt);
  for (std::size_t j = 0; j < fields.size(); ++j) {
    double v = 0.0, e = 0.0;
    switch (op.kind) {
      case OperatorKind::maximal: {
        OperatorValue r = eval_maximal(P, fields[j], 0.0);
        v = r.value;
        e = r.error;
        break;
      }
      case OperatorKind::fractional: {
        OperatorValue r = eval_maximal(P, fields[j], alpha_at(op, z));
        v = r.value;
        e = r.error;
        break;
      }
      case OperatorKind::potential: {
        OperatorValue r = eval_potential(P, fields[j], alpha_at(op, z));
        v = r.value;
        e = r.error;
        break;
      }
      case OperatorKind::singular: {
        SingularValue r = eval_singular(P, fields[j], op.kernel, {});
        v = r.value;
        e = r.error;
        break;
      }
    }
    out[j].values[idx] = v;
    out[j].errors[idx] = e;
  }
}

std::vector<SampledField> prepare(std::span<const ScalarField> fields, std::span<const Point> targets) {
  std::vector<SampledField> out(fields.size());
  for (auto& s : out) {
    s.points.assign(targets.begin(), targets.end());
    s.values.assign(targets.size(), 0.0);
    s.errors.assign(targets.size(), 0.0);
  }
  return out;
}

}  // namespace

KernelSpec KernelSpec::riesz_transform(int n, int j) {
  if (n < 1 || n > 3 || j < 1 || j > n) throw DomainError("riesz_transform: component must be in 1..n");
  KernelSpec k;
  k.kind = Kind::riesz_transform;
  k.n = n;
  k.j = j;
  return k;
}

KernelSpec KernelSpec::odd_homogeneous(int n, std::function<double(const Point&)> omega0) {
  if (n < 1 || n > 3) throw DomainError("odd_homogeneous: invalid dimension");
  KernelSpec k;
  k.kind = Kind::odd_homogeneous;
  k.n = n;
  k.omega0 = std::move(omega0);
  return k;
}

double KernelSpec::omega(const Point& theta) const {
  return kind == Kind::riesz_transform ? theta[j - 1] : omega0(theta);
}

double KernelSpec::operator()(const Point& x, const Point& y) const {
  Point v = x - y;
  double r = norm(v);
  return omega((1.0 / r) * v) * std::pow(r, -n);
}

const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::maximal:
      return "maximal";
    case OperatorKind::fractional:
      return "fractional";
    case OperatorKind::potential:
      return "potential";
    case OperatorKind::singular:
      return "singular";
  }
  return "?";
}

OperatorValue maximal(const ScalarField& f, const DomainSpec& dom, const Point& x, const ProbeOptions& opt) {
  return eval_maximal(build_probe(dom, x, opt), f, 0.0);
}

OperatorValue fractional_maximal(const ScalarField& f, const ExponentField& alpha, const DomainSpec& dom,
                                 const Point& x, const ProbeOptions& opt) {
  validate_order(alpha, dom);
  return eval_maximal(build_probe(dom, x, opt), f, alpha(x));
}

OperatorValue riesz_potential(const ScalarField& f, const ExponentField& alpha, const DomainSpec& dom,
                              const Point& x, const ProbeOptions& opt) {
  validate_order(alpha, dom);
  return eval_potential(build_probe(dom, x, opt), f, alpha(x));
}

SingularValue singular(const ScalarField& f, const KernelSpec& kernel, const DomainSpec& dom, const Point& x,
                       std::span<const double> epsilons, const ProbeOptions& opt) {
  if (kernel.n != dom.n) throw DomainError("kernel dimension does not match the domain");
  for (std::size_t k = 1; k < epsilons.size(); ++k)
    if (!(epsilons[k] < epsilons[k - 1])) throw DomainError("singular: epsilons must decrease");
  return eval_singular(build_probe(dom, x, opt), f, kernel, epsilons);
}

std::vector<SampledField> apply_operator(const OperatorSpec& op, std::span<const ScalarField> fields,
                                         const DomainSpec& dom, std::span<const Point> targets,
                                         const ProbeOptions& opt) {
  check_spec(op, dom);
  std::vector<SampledField> out = prepare(fields, targets);
  const long m = static_cast<long>(targets.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < m; ++i) evaluate_probe(op, fields, dom, targets[i], opt, out, static_cast<std::size_t>(i));
  return out;
}

namespace reference {
std::vector<SampledField> apply_operator(const OperatorSpec& op, std::span<const ScalarField> fields,
                                         const DomainSpec& dom, std::span<const Point> targets,
                                         const ProbeOptions& opt) {
  check_spec(op, dom);
  std::vector<SampledField> out = prepare(fields, targets);
  for (std::size_t i = 0; i < targets.size(); ++i) evaluate_probe(op, fields, dom, targets[i], opt, out, i);
  return out;
}
}  // namespace reference

TripleCheck check_exterior_kernel_bound(const DomainSpec& dom, double t, int samples, std::uint64_t seed) {
  if (!(t > 0.0)) throw DomainError("kernel bound check needs t > 0");
  TripleCheck out;
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  Point lo, hi;
  for (int k = 0; k < 3; ++k) {
    lo[k] = dom.shape == Shape::ball ? dom.center[k] - dom.radius : dom.lo[k];
    hi[k] = dom.shape == Shape::ball ? dom.center[k] + dom.radius : dom.hi[k];
  }
  auto draw = [&](auto accept) {
    for (int tries = 0; tries < 100000; ++tries) {
      Point y{};
      for (int k = 0; k < dom.n; ++k) y[k] = lo[k] + (hi[k] - lo[k]) * uniform();
      if (dom.contains(y) && accept(y)) return std::optional<Point>(y);
    }
    return std::optional<Point>();
  };
  // Points near the sphere |z - x0| = 2t stress the lower bound.
  auto draw_ball = [&](double r) {
    for (;;) {
      Point y{};
      double s = 0.0;
      for (int k = 0; k < dom.n; ++k) {
        y[k] = 2.0 * uniform() - 1.0;
        s += y[k] * y[k];
      }
      if (s <= 1.0 && s > 0.0) {
        Point p = along(dom.x0, r, y);
        if (dom.contains(p)) return std::optional<Point>(p);
      }
    }
  };
  out.min_lower_ratio = kInf;
  for (int i = 0; i < samples; ++i) {
    auto z = draw([&](const Point& p) { return distance(p, dom.x0) >= 2.0 * t; });
    if (!z) break;
    auto y = draw_ball(t);
    double dz = distance(*z, dom.x0), r = distance(*z, *y) / dz;
    ++out.checked;
    out.min_lower_ratio = std::min(out.min_lower_ratio, r);
    out.max_upper_ratio = std::max(out.max_upper_ratio, r);
    if (r < 0.5 || r > 1.5) ++out.violations;
  }
  return out;
}

std::vector<LemmaSides> local_integral_estimate(const ScalarField& f, const ExponentField& p, double gamma,
                                                const QuadratureGrid& grid) {
  if (!grid.full()) throw DomainError("local_integral_estimate needs a full grid");
  const int K = grid.depth(), n = grid.domain().n;
  const Point& x0 = grid.center();
  const double pc = p(x0);
  const double c = gamma + n * (1.0 - 1.0 / pc);
  std::vector<double> ext = exterior_norms(f, p, grid);
  std::vector<double> radii = grid.ladder().radii();

  // Inner integrals, accumulated band by band from the center outward.
  std::vector<double> terms(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    terms[i] = grid.weights()[i] * std::pow(grid.radius()[i], gamma) * std::abs(f(grid.nodes()[i]));
  Core core = radial_core(f, x0, grid.r_min(), n, gamma);
  std::vector<double> inner(K + 1);
  inner[K] = core.resolved ? std::abs(core.mass) : 0.0;
  for (int k = K - 1; k >= 0; --k) {
    std::size_t b = grid.exterior_end(k), e = grid.exterior_end(k + 1);
    inner[k] = inner[k + 1] + pairwise_sum(std::span<const double>(terms).subspan(b, e - b));
  }

  // g(s) = s^c N(s); on each octave the integral of g over d(ln s) uses the
  // power law through the end values, below r_K the last power law continues.
  std::vector<double> g(K + 1);
  for (int k = 0; k <= K; ++k) g[k] = std::pow(radii[k], c) * ext[k];
  const double ln2 = std::log(2.0);
  auto octave = [&](double g_out, double g_in) {
    if (g_out == g_in || g_out <= 0.0 || g_in <= 0.0) return 0.5 * (g_out + g_in) * ln2;
    double slope = std::log(g_out / g_in) / ln2;
    return (g_out - g_in) / slope;
  };
  double tail = kInf;
  if (K >= 1 && g[K] > 0.0 && g[K - 1] > g[K]) tail = g[K] * ln2 / std::log(g[K - 1] / g[K]);
  if (g[K] == 0.0) tail = 0.0;
  std::vector<double> rhs(K + 1);
  rhs[K] = tail;
  for (int k = K - 1; k >= 0; --k) rhs[k] = rhs[k + 1] + octave(g[k], g[k + 1]);

  std::vector<LemmaSides> out;
  for (int k = 0; k <= K; ++k) out.push_back({radii[k], inner[k], rhs[k]});
  return out;
}

}  // namespace cmorrey
