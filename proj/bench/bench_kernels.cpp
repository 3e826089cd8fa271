// Parallel reductions against the serial reference.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "cmorrey/kernels.hpp"

using namespace cmorrey;

namespace {

struct Data {
  std::vector<double> la, p, w;
  explicit Data(std::size_t n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-3.0, 3.0), pe(1.1, 4.0), we(0.0, 1e-3);
    for (std::size_t i = 0; i < n; ++i) {
      la.push_back(u(rng));
      p.push_back(pe(rng));
      w.push_back(we(rng));
    }
  }
};

void BM_modular_parallel(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::modular_sum(d.la, d.p, d.w, 0.1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_modular_reference(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::modular_sum(d.la, d.p, d.w, 0.1));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_weighted_parallel(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::weighted_sum(d.la, d.w));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_weighted_reference(benchmark::State& st) {
  Data d(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::weighted_sum(d.la, d.w));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_map_parallel(benchmark::State& st) {
  std::vector<double> out(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    kernels::parallel_map(std::span<double>(out), [](std::size_t i) { return std::exp(-1e-6 * i) * std::sin(i); });
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_map_reference(benchmark::State& st) {
  std::vector<double> out(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) {
    kernels::reference::serial_map(std::span<double>(out),
                                   [](std::size_t i) { return std::exp(-1e-6 * i) * std::sin(i); });
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_modular_parallel)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_modular_reference)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_weighted_parallel)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_weighted_reference)->Range(1 << 12, 1 << 20);
BENCHMARK(BM_map_parallel)->Range(1 << 12, 1 << 18);
BENCHMARK(BM_map_reference)->Range(1 << 12, 1 << 18);

BENCHMARK_MAIN();
