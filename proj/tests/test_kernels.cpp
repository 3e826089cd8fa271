#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cmorrey/kernels.hpp"

using namespace cmorrey;
using doctest::Approx;

namespace {

struct Data {
  std::vector<double> la, p, w, v;
};

Data make(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0), pe(1.1, 4.0), we(0.0, 1e-3);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    d.la.push_back(i % 97 == 0 ? -std::numeric_limits<double>::infinity() : u(rng));
    d.p.push_back(pe(rng));
    d.w.push_back(we(rng));
    d.v.push_back(u(rng) * 1e3);
  }
  return d;
}

struct ThreadGuard {
  int saved = kernels::max_threads();
  ~ThreadGuard() { kernels::set_threads(saved); }
};

}  // namespace

TEST_CASE("parallel reductions match the serial reference bitwise") {
  ThreadGuard guard;
  for (std::size_t n : {0ul, 1ul, 511ul, 512ul, 513ul, 10000ul, 100003ul}) {
    Data d = make(n, static_cast<unsigned>(n) + 7);
    const double mref = kernels::reference::modular_sum(d.la, d.p, d.w, 0.3);
    const double wref = kernels::reference::weighted_sum(d.v, d.w);
    for (int t : {1, 2, 3, 4}) {
      kernels::set_threads(t);
      CHECK(kernels::modular_sum(d.la, d.p, d.w, 0.3) == mref);
      CHECK(kernels::weighted_sum(d.v, d.w) == wref);
    }
  }
}

TEST_CASE("reductions agree with a long double sum") {
  Data d = make(20000, 3);
  long double m = 0.0L, s = 0.0L;
  for (std::size_t i = 0; i < d.la.size(); ++i) {
    m += static_cast<long double>(d.w[i]) * std::exp(static_cast<long double>(d.p[i]) * (d.la[i] - 0.3L));
    s += static_cast<long double>(d.v[i]) * d.w[i];
  }
  CHECK(kernels::modular_sum(d.la, d.p, d.w, 0.3) == Approx(static_cast<double>(m)).epsilon(1e-14));
  CHECK(kernels::weighted_sum(d.v, d.w) == Approx(static_cast<double>(s)).epsilon(1e-12));
}

TEST_CASE("modular sum: zeros contribute nothing and scaling by eta") {
  std::vector<double> la{-std::numeric_limits<double>::infinity(), std::log(2.0)};
  std::vector<double> p{2.0, 3.0};
  std::vector<double> w{5.0, 1.0};
  CHECK(kernels::modular_sum(la, p, w, 0.0) == Approx(8.0));
  CHECK(kernels::modular_sum(la, p, w, std::log(2.0)) == Approx(1.0));
}

TEST_CASE("parallel_map matches serial_map") {
  ThreadGuard guard;
  std::vector<double> a(1234), b(1234);
  auto fn = [](std::size_t i) { return std::sin(0.1 * i) * std::exp(-1e-3 * i); };
  kernels::reference::serial_map(std::span<double>(b), fn);
  for (int t : {1, 3}) {
    kernels::set_threads(t);
    std::fill(a.begin(), a.end(), 0.0);
    kernels::parallel_map(std::span<double>(a), fn);
    CHECK(a == b);
  }
}
