#include "cmorrey/quadrature.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cmorrey/point.hpp"

namespace cmorrey {

double sphere_surface_measure(int n) {
  if (n < 1) throw std::domain_error("sphere_surface_measure: n must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

namespace {

GaussRule build_gauss(int m) {
  GaussRule r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (z * p1 - p0) / (z * z - 1.0);
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[m - 1 - i] = z;
    r.w[i] = w;
    r.w[m - 1 - i] = w;
  }
  if (m % 2 == 1) r.x[m / 2] = 0.0;
  return r;
}

constexpr int kMaxGauss = 96;

KronrodRule mirror(const std::vector<double>& xs, const std::vector<double>& wk,
                   const std::vector<double>& wg) {
  // xs descending, last is 0.
  KronrodRule r;
  int h = static_cast<int>(xs.size());
  for (int i = 0; i < h; ++i) {
    r.x.push_back(-xs[i]);
    r.w.push_back(wk[i]);
    r.w_gauss.push_back(wg[i]);
  }
  for (int i = h - 2; i >= 0; --i) {
    r.x.push_back(xs[i]);
    r.w.push_back(wk[i]);
    r.w_gauss.push_back(wg[i]);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int m) {
  static const std::vector<GaussRule> table = [] {
    std::vector<GaussRule> t(kMaxGauss + 1);
    for (int k = 1; k <= kMaxGauss; ++k) t[k] = build_gauss(k);
    return t;
  }();
  if (m < 1 || m > kMaxGauss) throw std::domain_error("gauss_legendre: unsupported order");
  return table[m];
}

const KronrodRule& kronrod7() {
  static const KronrodRule r = mirror(
      {0.960491268708020283423507092629080, 0.774596669241483377035853079956480,
       0.434243749346802558002071502844628, 0.0},
      {0.104656226026467265193823857192073, 0.268488089868333440728569280666710,
       0.401397414775962222905051818618432, 0.450916538658474142345110087045571},
      {0.0, 0.555555555555555555555555555555556, 0.0, 0.888888888888888888888888888888889});
  return r;
}

const KronrodRule& kronrod15() {
  static const KronrodRule r = mirror(
      {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
       0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
       0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
       0.207784955007898467600689403773245, 0.0},
      {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
       0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
       0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
       0.204432940075298892414161999234649, 0.209482141084727828012999174891714},
      {0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780, 0.0,
       0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327});
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

LogRadialIntegral integrate_log_radial(const std::function<double(double)>& h, double L_hi,
                                       double L_lo) {
  LogRadialIntegral out;
  if (!(L_hi > L_lo)) return out;
  const double U = L_hi - L_lo;
  const GaussRule& g = gauss_legendre(24);
  const GaussRule& gb = gauss_legendre(16);

  if (std::isfinite(U) && U > 1.0) {
    // Finite range: panels grow geometrically away from both ends, which
    // resolves exponential behaviour at either end and power laws in between.
    std::vector<double> edges{0.0};
    for (double w = 0.125; edges.back() + w < 0.5 * U; w *= 2.0) edges.push_back(edges.back() + w);
    std::size_t half = edges.size();
    edges.push_back(0.5 * U);
    for (std::size_t i = half; i-- > 1;) edges.push_back(U - edges[i]);
    edges.push_back(U);
    std::vector<double> panels;
    panels.reserve(edges.size());
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
      double a = edges[j], b = edges[j + 1], s = 0.0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        double u = a + 0.5 * (b - a) * (g.x[i] + 1.0);
        s += 0.5 * (b - a) * g.w[i] * std::exp(h(L_hi - u));
      }
      panels.push_back(s);
    }
    out.value = pairwise_sum(panels);
    out.bands = static_cast<int>(panels.size());
    if (!std::isfinite(out.value)) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
    }
    return out;
  }

  double head = 0.0;
  {
    double len = std::min(1.0, U);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      double u = 0.5 * len * (g.x[i] + 1.0);
      head += 0.5 * len * g.w[i] * std::exp(h(L_hi - u));
    }
  }
  if (!std::isfinite(head)) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  if (U <= 1.0) {
    out.value = head;
    return out;
  }

  const double tau_min = std::isfinite(U) ? 1.0 / U : 0.0;
  std::vector<double> bands;
  double running = head;
  // Beyond u ~ 7e10 the exponent h loses precision when its terms linear in L
  // cancel (power-law integrands); the remainder is estimated from the decay.
  constexpr int kMaxBands = 36;
  for (int k = 0; k < kMaxBands; ++k) {
    double b = std::ldexp(1.0, -k);
    if (b <= tau_min) break;
    double a = std::max(std::ldexp(1.0, -k - 1), tau_min);
    double s = 0.0;
    for (std::size_t i = 0; i < gb.x.size(); ++i) {
      double tau = a + 0.5 * (b - a) * (gb.x[i] + 1.0);
      s += 0.5 * (b - a) * gb.w[i] * std::exp(h(L_hi - 1.0 / tau) - 2.0 * std::log(tau));
    }
    if (!std::isfinite(s)) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
      out.bands = k + 1;
      return out;
    }
    bands.push_back(s);
    running += s;
    if (tau_min > 0.0) continue;
    if (k >= 8) {
      bool small = true;
      for (int j = k - 2; j <= k; ++j) small = small && bands[j] <= 1e-17 * running;
      if (running == 0.0 && k >= 60) break;
      if (small && running > 0.0) break;
    }
  }
  out.bands = static_cast<int>(bands.size());
  double total = head + pairwise_sum(bands);
  if (tau_min == 0.0 && out.bands == kMaxBands) {
    // Still contributing at the deepest band: fit b_j = c j^m q^j through three
    // bands (power laws in u times log factors) and sum the remainder.
    const int k3 = kMaxBands, k2 = k3 - 6, k1 = k3 - 12;
    auto lb = [&](int j) { return std::log(bands[j - 1]); };
    const double d21 = (lb(k2) - lb(k1)) / (k2 - k1), d32 = (lb(k3) - lb(k2)) / (k3 - k2);
    const double e21 = (std::log(k2) - std::log(k1)) / (k2 - k1), e32 = (std::log(k3) - std::log(k2)) / (k3 - k2);
    const double m = (d32 - d21) / (e32 - e21);
    const double lq = d32 - m * e32;
    const double lc = lb(k3) - m * std::log(k3) - lq * k3;
    auto term = [&](double j) { return std::exp(lc + m * std::log(j) + lq * j); };
    double tail = 0.0;
    bool ok = std::isfinite(m) && std::isfinite(lq);
    constexpr int kTailTerms = 1000000;
    if (ok && lq < -1e-4) {
      for (int j = k3 + 1; j < k3 + kTailTerms; ++j) {
        double t = term(j);
        tail += t;
        if (t <= 1e-17 * (total + tail)) break;
      }
    } else if (ok && lq <= 1e-4 && m < -1.1) {
      double J = k3 + kTailTerms;
      for (int j = k3 + 1; j < J; ++j) tail += term(j);
      tail += term(J) * J / (-m - 1.0);
    } else {
      ok = false;
    }
    if (!ok || !std::isfinite(tail)) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    total += tail;
  }
  out.value = total;
  return out;
}

}  // namespace cmorrey
