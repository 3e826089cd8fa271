#include "cmorrey/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>

#include "cmorrey/kernels.hpp"
#include "cmorrey/quadrature.hpp"
#include "cmorrey/trend.hpp"

namespace cmorrey {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Depths ln(ell/r) of the radii probed below the grid for radial integrands.
constexpr double kDeepDepths[] = {1e2, 1e3, 1e4, 1e5, 1e6};

struct NodeData {
  std::vector<double> la;  // log|f|
  std::vector<double> p;
};

std::vector<double> log_abs_of(std::span<const double> values) {
  std::vector<double> la(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double v = values[i];
    if (!std::isfinite(v)) throw SingularityError("norm: non-finite field value at a node");
    la[i] = v == 0.0 ? -kInf : std::log(std::abs(v));
  }
  return la;
}

std::vector<double> sample_values(const ScalarField& f, const QuadratureGrid& g) {
  std::vector<double> v(g.size());
  kernels::parallel_map(v, [&](std::size_t i) { return f(g.nodes()[i]); });
  return v;
}

std::vector<double> sample_exponent(const ExponentField& p, const QuadratureGrid& g) {
  std::vector<double> v(g.size());
  kernels::parallel_map(v, [&](std::size_t i) { return p(g.nodes()[i]); });
  return v;
}

NodeData sample(const ScalarField& f, const ExponentField& p, const QuadratureGrid& g) {
  return {log_abs_of(sample_values(f, g)), sample_exponent(p, g)};
}

// The ball B(center, r_min) of a grid, integrated along the radius when the
// integrand is radial about the center.
struct RadialCore {
  bool active = false;
  const ScalarField* f = nullptr;
  const ExponentField* p = nullptr;
  std::optional<WeightFunction> density;
  int n = 2;
  double L_top = 0.0;
  double surface = 0.0;

  LogRadialIntegral modular(double log_eta, double L_lo = -kInf) const {
    auto h = [&](double L) {
      double la = f->radial(L).log_abs;
      double v = p->radial(L) * (la - log_eta) + n * L;
      if (density) v += density->log_value(L);
      return v;
    };
    LogRadialIntegral r = integrate_log_radial(h, L_top, L_lo);
    r.value *= surface;
    return r;
  }
};

RadialCore make_core(const ScalarField& f, const ExponentField& p, const QuadratureGrid& g,
                     std::optional<WeightFunction> density = std::nullopt) {
  RadialCore c;
  const Point& x = g.center();
  c.active = g.has_core() && f.radial_about(x) && p.radial_about(x) &&
             g.domain().boundary_distance(x) > g.r_min();
  c.f = &f;
  c.p = &p;
  c.density = density;
  c.n = g.domain().n;
  c.L_top = std::log(g.r_min());
  c.surface = sphere_surface_measure(c.n);
  return c;
}

struct LuxOutcome {
  double value = 0.0;
  double log_value = -kInf;
  bool infinite = false;
};

LuxOutcome lux_from_log(double lv) { return {std::exp(lv), lv, false}; }

// inf{eta : I(eta) <= 1} with I given as a function of ln(eta). Works in log
// space throughout so that norms far outside the double range can be located.
LuxOutcome solve_luxemburg(const std::function<double(double)>& I, double p_minus,
                           std::optional<double> constant_p) {
  double I0 = I(0.0);
  if (I0 == 0.0) return {0.0, -kInf, false};
  if (constant_p && std::isfinite(I0)) return lux_from_log(std::log(I0) / *constant_p);
  double hi, lo;
  if (std::isfinite(I0)) {
    hi = std::log(std::max(1.0, I0)) / p_minus;
    lo = hi - 64.0 * std::log(2.0);
    while (I(lo) <= 1.0) {
      hi = lo;
      lo -= 64.0 * std::log(2.0);
    }
  } else {
    // Raise eta geometrically in the log until the modular becomes finite and <= 1.
    lo = 0.0;
    hi = 1.0;
    while (!(I(hi) <= 1.0)) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return {kInf, kInf, true};
    }
  }
  for (;;) {
    double mid = 0.5 * (hi + lo);
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi)) || mid <= lo || mid >= hi) break;
    if (I(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lux_from_log(0.5 * (hi + lo));
}

std::optional<double> constant_value(const ExponentField& p) {
  if (!p.is_constant()) return std::nullopt;
  return p(Point{});
}

double n_over_conjugate(int n, double p) { return n * (1.0 - 1.0 / p); }

std::span<const double> prefix(const std::vector<double>& v, std::size_t b, std::size_t e) {
  return std::span<const double>(v).subspan(b, e - b);
}

struct ComplementaryInput {
  std::vector<double> la, p;
  const ExponentField* pf;
  const WeightFunction* omega;
  const QuadratureGrid* grid;
  const RadialCore* core;  // may be null
};

NormReport complementary_impl(const ComplementaryInput& in) {
  const QuadratureGrid& g = *in.grid;
  if (!g.full()) throw DomainError("complementary norm needs a full grid");
  const int K = g.depth();
  const int n = g.domain().n;
  const double pc = (*in.pf)(g.center());
  const double npc = n_over_conjugate(n, pc);
  const double p_minus = in.pf->bounds(g.domain()).first;
  const std::optional<double> cp = constant_value(*in.pf);
  const auto& w = g.weights();
  const auto& wc = g.weights_coarse();

  auto ext_norm = [&](std::size_t end, const std::vector<double>& weights) {
    if (end == 0) return 0.0;
    auto I = [&](double log_eta) {
      return kernels::modular_sum(prefix(in.la, 0, end), prefix(in.p, 0, end), prefix(weights, 0, end), log_eta);
    };
    return solve_luxemburg(I, p_minus, cp).value;
  };
  auto log_prefactor = [&](double L) { return npc * L - in.omega->log_value(L); };

  NormReport rep;
  rep.kind = "complementary";
  std::vector<double> radii = g.ladder().radii();
  std::vector<double> ext(K + 1);
  kernels::parallel_map(ext, [&](std::size_t k) { return ext_norm(g.exterior_end(static_cast<int>(k)), w); });
  std::vector<double> v(K + 1);
  for (int k = 0; k <= K; ++k) v[k] = ext[k] == 0.0 ? 0.0 : std::exp(log_prefactor(std::log(radii[k]))) * ext[k];
  std::size_t arg = std::max_element(v.begin(), v.end()) - v.begin();
  rep.ladder_max = v[arg];
  rep.argmax_radius = radii[arg];
  double coarse = ext_norm(g.exterior_end(static_cast<int>(arg)), wc);
  rep.quadrature_error = ext[arg] == 0.0 ? 0.0 : std::abs(ext[arg] - coarse) * v[arg] / ext[arg];
  GrowthVerdict gv = ladder_growth(radii, v);
  rep.growth_slope = gv.slope;
  rep.ladder_radii = radii;
  rep.ladder_values = v;
  rep.truncation_radius = radii[K];
  double best = rep.ladder_max;

  if (in.core && in.core->active) {
    const RadialCore& core = *in.core;
    auto total = [&](double log_eta) {
      return kernels::modular_sum(in.la, in.p, w, log_eta);
    };
    std::vector<double> deep(std::size(kDeepDepths));
    kernels::parallel_map(deep, [&](std::size_t j) {
      double L = std::log(g.domain().ell) - kDeepDepths[j];
      auto I = [&](double log_eta) {
        LogRadialIntegral c = core.modular(log_eta, L);
        return total(log_eta) + c.value;
      };
      LuxOutcome o = solve_luxemburg(I, p_minus, cp);
      if (o.infinite) return kInf;
      if (o.value == 0.0 && o.log_value == -kInf) return 0.0;
      return std::exp(log_prefactor(L) + o.log_value);
    });
    rep.divergent = deep_growth(deep[deep.size() - 2], deep.back());
    for (double d : deep) best = std::max(best, d);
    rep.truncation_radius = 0.0;
  } else {
    rep.divergent = gv.divergent;
  }
  rep.value = rep.divergent ? kInf : best;
  return rep;
}

}  // namespace

WeightFunction WeightedMeasure::density() const {
  if (log_power == 0.0) return WeightFunction::power(nu);
  return WeightFunction::power_log(nu, log_power, log_scale);
}

std::string norm_csv_header() {
  return "norm_kind,value,argmax_radius,error,truncation_radius,divergence_flag,growth_slope";
}

std::string to_csv(const NormReport& r) {
  char buf[512];
  char arg[64] = "";
  if (r.argmax_radius) std::snprintf(arg, sizeof arg, "%.17g", *r.argmax_radius);
  std::snprintf(buf, sizeof buf, "%s,%.17g,%s,%.17g,%.17g,%d,%.17g", r.kind.c_str(), r.value, arg,
                r.quadrature_error, r.truncation_radius, r.divergent ? 1 : 0, r.growth_slope);
  return buf;
}

ModularResult modular(const ScalarField& f, const ExponentField& p, const DomainSpec& dom, double r_in,
                      double r_out, const GridOptions& opt) {
  ModularResult out;
  if (r_out <= r_in) return out;
  GridOptions o = opt;
  o.r_in = r_in;
  o.r_out = r_out;
  QuadratureGrid g(dom, dom.x0, o);
  NodeData d = sample(f, p, g);
  out.value = kernels::modular_sum(d.la, d.p, g.weights(), 0.0);
  out.error = std::abs(out.value - kernels::modular_sum(d.la, d.p, g.weights_coarse(), 0.0));
  if (g.has_core()) {
    RadialCore core = make_core(f, p, g);
    if (core.active) {
      LogRadialIntegral c = core.modular(0.0);
      out.value += c.value;
      out.divergent = c.divergent;
    } else {
      out.truncation_radius = g.r_min();
    }
  }
  return out;
}

namespace {

NormReport luxemburg_impl(const ScalarField& f, const ExponentField& p, const DomainSpec& dom, double r_in,
                          double r_out, const GridOptions& opt, bool force_bisection) {
  GridOptions o = opt;
  o.r_in = r_in;
  o.r_out = r_out;
  QuadratureGrid g(dom, dom.x0, o);
  NodeData d = sample(f, p, g);
  RadialCore core = make_core(f, p, g);
  const double p_minus = p.bounds(dom).first;
  std::optional<double> cp = force_bisection ? std::nullopt : constant_value(p);
  auto solve = [&](const std::vector<double>& w) {
    auto I = [&](double log_eta) {
      double v = kernels::modular_sum(d.la, d.p, w, log_eta);
      if (core.active) v += core.modular(log_eta).value;
      return v;
    };
    return solve_luxemburg(I, p_minus, cp);
  };
  NormReport rep;
  rep.kind = "luxemburg";
  LuxOutcome fine = solve(g.weights());
  rep.value = fine.value;
  rep.divergent = fine.infinite;
  if (!fine.infinite) rep.quadrature_error = std::abs(fine.value - solve(g.weights_coarse()).value);
  rep.ladder_max = rep.value;
  rep.truncation_radius = g.has_core() && !core.active ? g.r_min() : 0.0;
  if (g.has_core() && !core.active && g.full()) {
    // Cumulative modular toward the center as a divergence diagnostic.
    const int K = g.depth();
    std::vector<double> radii = g.ladder().radii(), cum(K + 1);
    for (int k = 0; k <= K; ++k) {
      std::size_t e = g.exterior_end(k);
      cum[k] = kernels::modular_sum(prefix(d.la, 0, e), prefix(d.p, 0, e), prefix(g.weights(), 0, e), 0.0);
    }
    GrowthVerdict gv = ladder_growth(radii, cum);
    rep.growth_slope = gv.slope;
    if (gv.divergent) {
      rep.divergent = true;
      rep.value = kInf;
    }
  }
  return rep;
}

}  // namespace

NormReport luxemburg_norm(const ScalarField& f, const ExponentField& p, const DomainSpec& dom, double r_in,
                          double r_out, const GridOptions& opt) {
  return luxemburg_impl(f, p, dom, r_in, r_out, opt, false);
}

NormReport luxemburg_norm_bisection(const ScalarField& f, const ExponentField& p, const DomainSpec& dom,
                                    const GridOptions& opt) {
  return luxemburg_impl(f, p, dom, 0.0, kInf, opt, true);
}

std::vector<double> exterior_norms(const ScalarField& f, const ExponentField& p, const QuadratureGrid& g) {
  NodeData d = sample(f, p, g);
  const double p_minus = p.bounds(g.domain()).first;
  const std::optional<double> cp = constant_value(p);
  std::vector<double> ext(g.depth() + 1);
  kernels::parallel_map(ext, [&](std::size_t k) {
    std::size_t end = g.exterior_end(static_cast<int>(k));
    if (end == 0) return 0.0;
    auto I = [&](double log_eta) {
      return kernels::modular_sum(prefix(d.la, 0, end), prefix(d.p, 0, end), prefix(g.weights(), 0, end),
                                  log_eta);
    };
    return solve_luxemburg(I, p_minus, cp).value;
  });
  return ext;
}

NormReport complementary_morrey_norm(const ScalarField& f, const ExponentField& p, const WeightFunction& omega,
                                     const QuadratureGrid& grid) {
  NodeData d = sample(f, p, grid);
  RadialCore core = make_core(f, p, grid);
  ComplementaryInput in{std::move(d.la), std::move(d.p), &p, &omega, &grid, &core};
  return complementary_impl(in);
}

NormReport complementary_morrey_norm(std::span<const double> values, const ExponentField& p,
                                     const WeightFunction& omega, const QuadratureGrid& grid) {
  if (values.size() != grid.size()) throw DomainError("sampled field does not match the grid");
  ComplementaryInput in{log_abs_of(values), sample_exponent(p, grid), &p, &omega, &grid, nullptr};
  return complementary_impl(in);
}

NormReport weighted_lebesgue_norm(const ScalarField& f, double p, const WeightedMeasure& mu,
                                  const QuadratureGrid& g) {
  if (!(p >= 1.0)) throw ExponentError("weighted norm needs a constant p >= 1");
  if (!g.full()) throw DomainError("weighted norm needs a full grid");
  const ExponentField pf = ExponentField::constant(p);
  const WeightFunction dens = mu.density();
  std::vector<double> la = log_abs_of(sample_values(f, g));
  std::vector<double> pv(g.size(), p);
  std::vector<double> w(g.size()), wc(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double dv = std::exp(dens.log_value(std::log(g.radius()[i])));
    w[i] = g.weights()[i] * dv;
    wc[i] = g.weights_coarse()[i] * dv;
  }
  const int K = g.depth();
  std::vector<double> radii = g.ladder().radii();
  std::vector<double> band(K);
  for (int b = 0; b < K; ++b) {
    std::size_t s = g.band_start(b), e = g.band_start(b + 1);
    band[b] = kernels::modular_sum(prefix(la, s, e), prefix(pv, s, e), prefix(w, s, e), 0.0);
  }
  std::vector<double> cum(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) cum[k] = pairwise_sum(std::span<const double>(band).first(k));

  NormReport rep;
  rep.kind = "weighted";
  rep.ladder_radii = radii;
  rep.ladder_values = cum;
  GrowthVerdict gv = ladder_growth(radii, cum);
  rep.growth_slope = gv.slope;
  double total = cum[K];
  double total_coarse = kernels::modular_sum(la, pv, wc, 0.0);
  RadialCore core = make_core(f, pf, g, dens);
  if (core.active) {
    LogRadialIntegral c = core.modular(0.0);
    rep.divergent = c.divergent;
    total += c.value;
    total_coarse += c.value;
    rep.truncation_radius = 0.0;
  } else {
    rep.divergent = gv.divergent;
    rep.truncation_radius = g.r_min();
  }
  rep.ladder_max = std::pow(cum[K], 1.0 / p);
  if (rep.divergent) {
    rep.value = kInf;
  } else {
    rep.value = std::pow(total, 1.0 / p);
    rep.quadrature_error = std::abs(rep.value - std::pow(total_coarse, 1.0 / p));
  }
  return rep;
}

namespace {

// Level sets of a radial profile, resolved along the radius.
struct RadialWeak {
  const ScalarField* f;
  const QuadratureGrid* g;
  double a;  // n + nu
  double W;  // sum of ray weights
  double r_in_all;
  double mu_total;

  double log_mu_ball(double L) const {
    double rho = std::exp(L);
    if (rho <= r_in_all) return std::log(W) + a * L - std::log(a);
    double s = 0.0;
    for (const auto& r : g->rays()) s += r.weight * std::pow(std::min(rho, r.exit), a) / a;
    return std::log(s);
  }
  double la(double L) const { return f->radial(L).log_abs; }
};

}  // namespace

NormReport weak_weighted_norm(const ScalarField& f, double p, const WeightedMeasure& mu,
                              const QuadratureGrid& g, std::span<const double> thresholds) {
  if (!(p >= 1.0)) throw ExponentError("weak norm needs a constant p >= 1");
  const int n = g.domain().n;
  NormReport rep;
  rep.kind = "weak";
  const bool power_density = mu.log_power == 0.0;
  const Point& c = g.center();

  if (power_density && f.radial_about(c) && g.has_core()) {
    const double a = n + mu.nu;
    if (!(a > 0.0)) throw DomainError("weak norm: weight not locally integrable");
    RadialWeak rw{&f, &g, a, 0.0, kInf, 0.0};
    double maxR = 0.0, mu_total = 0.0;
    for (const auto& r : g.rays()) {
      rw.W += r.weight;
      rw.r_in_all = std::min(rw.r_in_all, r.exit);
      maxR = std::max(maxR, r.exit);
      mu_total += r.weight * std::pow(r.exit, a) / a;
    }
    rw.mu_total = mu_total;
    const double h = std::log(2.0) / 32.0;
    const double Ltop = std::log(maxR);
    const int J = static_cast<int>(90.0 / h);
    std::vector<double> L(J + 1), A(J + 1);
    for (int j = 0; j <= J; ++j) {
      // Start just inside the outermost radius.
      L[j] = Ltop - (j + 0.5) * h;
      A[j] = rw.la(L[j]);
    }
    bool dec = true, inc = true;
    for (int j = 1; j <= J; ++j) {
      if (A[j] < A[j - 1] - 1e-12 * std::abs(A[j - 1])) dec = false;
      if (A[j] > A[j - 1] + 1e-12 * std::abs(A[j - 1])) inc = false;
    }
    if (dec || inc) {
      // Largest (dec) or smallest (inc) radius where log|f| >= level.
      auto edge = [&](double level, double Lin, double Lout) {
        for (int it = 0; it < 60; ++it) {
          double m = 0.5 * (Lin + Lout);
          if (rw.la(m) >= level) {
            Lin = m;
          } else {
            Lout = m;
          }
        }
        return Lin;
      };
      auto log_mu_level = [&](int j) {
        // mu{|f| >= exp(A[j])}
        if (dec) {
          double Le = j == 0 ? std::min(Ltop, edge(A[0], L[0], Ltop)) : edge(A[j], L[j], L[j - 1]);
          return rw.log_mu_ball(Le);
        }
        double Le = j == J ? L[J] : edge(A[j], L[j], L[j + 1]);
        double inner = std::exp(rw.log_mu_ball(Le));
        return std::log(std::max(0.0, rw.mu_total - inner));
      };
      if (thresholds.empty()) {
        std::vector<double> vals(J + 1, 0.0);
        for (int j = 0; j <= J; ++j) {
          if (A[j] == -kInf) continue;
          vals[j] = std::exp(A[j] + log_mu_level(j) / p);
        }
        std::size_t arg = std::max_element(vals.begin(), vals.end()) - vals.begin();
        // Refine the grid maximum: log of t mu{|f| >= t}^{1/p} at t = |f(exp(Lx))|.
        auto G = [&](double Lx) {
          const double level = rw.la(Lx);
          if (level == -kInf) return -kInf;
          double lm;
          if (dec) {
            lm = rw.log_mu_ball(Lx >= Ltop ? Ltop : edge(level, Lx, Ltop));
          } else {
            lm = std::log(std::max(0.0, rw.mu_total - std::exp(rw.log_mu_ball(edge(level, Lx, L[J])))));
          }
          return level + lm / p;
        };
        double lo = L[std::min<std::size_t>(arg + 1, J)], hi = arg == 0 ? Ltop : L[arg - 1];
        double best_L = L[arg], best_G = std::log(vals[arg]);
        auto consider = [&](double Lx) {
          double v = G(Lx);
          if (v > best_G) {
            best_G = v;
            best_L = Lx;
          }
        };
        consider(Ltop);
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double g1 = G(x1), g2 = G(x2);
        for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
          if (g1 < g2) {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = G(x2);
          } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = G(x1);
          }
        }
        consider(x1);
        consider(x2);
        rep.ladder_max = std::exp(best_G);
        rep.argmax_radius = std::exp(best_L);
        int back = static_cast<int>(10.0 / h);
        rep.divergent = dec && deep_growth(vals[J - back], vals[J]);
        rep.ladder_radii.resize(J + 1);
        for (int j = 0; j <= J; ++j) rep.ladder_radii[j] = std::exp(L[j]);
        rep.ladder_values = vals;
      } else {
        double best = 0.0;
        for (double t : thresholds) {
          double lt = std::log(t);
          // Level set {|f| > t}: radii where log|f| > lt.
          double m;
          if (dec) {
            if (A[J] <= lt) {
              m = 0.0;
            } else {
              int j = 0;
              while (A[j] <= lt) ++j;
              double Le = j == 0 ? Ltop : edge(std::nextafter(lt, kInf), L[j], L[j - 1]);
              m = std::exp(rw.log_mu_ball(Le));
            }
          } else {
            if (A[0] <= lt) {
              m = 0.0;
            } else {
              int j = J;
              while (A[j] <= lt) --j;
              double Le = j == J ? L[J] : edge(std::nextafter(lt, kInf), L[j], L[j + 1]);
              m = rw.mu_total - std::exp(rw.log_mu_ball(Le));
            }
          }
          best = std::max(best, t * std::pow(std::max(0.0, m), 1.0 / p));
        }
        rep.ladder_max = best;
      }
      rep.value = rep.divergent ? kInf : rep.ladder_max;
      rep.truncation_radius = 0.0;
      return rep;
    }
  }

  // Discrete level sets of the node values.
  const WeightFunction dens = mu.density();
  std::vector<double> v = sample_values(f, g);
  std::vector<double> w(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(v[i])) throw SingularityError("weak norm: non-finite field value at a node");
    v[i] = std::abs(v[i]);
    w[i] = g.weights()[i] * std::exp(dens.log_value(std::log(g.radius()[i])));
  }
  if (thresholds.empty()) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return v[a] != v[b] ? v[a] > v[b] : a < b;
    });
    double cum = 0.0, best = 0.0;
    for (std::size_t k = 0; k < idx.size();) {
      std::size_t e = k;
      while (e < idx.size() && v[idx[e]] == v[idx[k]]) cum += w[idx[e++]];
      best = std::max(best, v[idx[k]] * std::pow(cum, 1.0 / p));
      k = e;
    }
    rep.ladder_max = best;
  } else {
    double best = 0.0;
    for (double t : thresholds) {
      double m = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > t) m += w[i];
      best = std::max(best, t * std::pow(m, 1.0 / p));
    }
    rep.ladder_max = best;
  }
  rep.value = rep.ladder_max;
  rep.truncation_radius = g.r_min();
  return rep;
}

NormReport classical_morrey_norm(const ScalarField& f, const ExponentField& p, const ExponentField& lambda,
                                 const QuadratureGrid& grid, std::span<const Point> centers) {
  auto local = [&](const QuadratureGrid& g) {
    if (!g.full()) throw DomainError("classical Morrey norm needs a full grid");
    const Point& c = g.center();
    const double lam = lambda(c), pc = p(c);
    if (!(lam >= 0.0) || !(lam < g.domain().n)) throw ExponentError("classical Morrey norm needs 0 <= lambda < n");
    NodeData d = sample(f, p, g);
    RadialCore core = make_core(f, p, g);
    const double p_minus = p.bounds(g.domain()).first;
    const std::optional<double> cp = constant_value(p);
    const int K = g.depth();
    std::vector<double> radii = g.ladder().radii(), v(K + 1);
    kernels::parallel_map(v, [&](std::size_t k) {
      std::size_t s = g.exterior_end(static_cast<int>(k));
      auto I = [&](double log_eta) {
        double m = kernels::modular_sum(prefix(d.la, s, g.size()), prefix(d.p, s, g.size()),
                                        prefix(g.weights(), s, g.size()), log_eta);
        if (core.active) m += core.modular(log_eta).value;
        return m;
      };
      LuxOutcome o = solve_luxemburg(I, p_minus, cp);
      if (o.infinite) return kInf;
      return std::pow(radii[k], -lam / pc) * o.value;
    });
    NormReport r;
    r.kind = "classical_morrey";
    std::size_t arg = std::max_element(v.begin(), v.end()) - v.begin();
    r.ladder_max = v[arg];
    r.argmax_radius = radii[arg];
    GrowthVerdict gv = ladder_growth(radii, v);
    r.growth_slope = gv.slope;
    r.divergent = gv.divergent || !std::isfinite(v[arg]);
    r.value = r.divergent ? kInf : r.ladder_max;
    r.truncation_radius = core.active ? 0.0 : g.r_min();
    r.ladder_radii = radii;
    r.ladder_values = v;
    return r;
  };
  NormReport best = local(grid);
  for (const Point& x : centers) {
    QuadratureGrid gx(grid.domain(), x, grid.options());
    NormReport r = local(gx);
    if (r.value > best.value) best = r;
  }
  return best;
}

}  // namespace cmorrey
