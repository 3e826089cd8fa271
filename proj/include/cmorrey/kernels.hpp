#pragma once

#include <cstddef>
#include <span>

namespace cmorrey::kernels {

// Reductions split the range into fixed chunks, sum each chunk with a pairwise
// tree and combine the chunk sums with another pairwise tree. The tree does not
// depend on the thread count, so the parallel and serial versions agree bitwise.
inline constexpr std::size_t kChunk = 512;

// sum_i w_i |f_i / eta|^{p_i}, with log|f_i| given (-inf for zeros).
double modular_sum(std::span<const double> log_abs, std::span<const double> expo,
                   std::span<const double> w, double log_eta);
double weighted_sum(std::span<const double> values, std::span<const double> w);

int max_threads();
void set_threads(int n);

namespace reference {
double modular_sum(std::span<const double> log_abs, std::span<const double> expo,
                   std::span<const double> w, double log_eta);
double weighted_sum(std::span<const double> values, std::span<const double> w);
}  // namespace reference

// out[i] = fn(i) for i < out.size(), dynamically scheduled.
template <class F>
void parallel_map(std::span<double> out, const F& fn) {
  const long n = static_cast<long>(out.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) out[i] = fn(static_cast<std::size_t>(i));
}

namespace reference {
template <class F>
void serial_map(std::span<double> out, const F& fn) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fn(i);
}
}  // namespace reference

}  // namespace cmorrey::kernels
