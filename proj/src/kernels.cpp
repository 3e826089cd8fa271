#include "cmorrey/kernels.hpp"

#include <omp.h>

#include <array>
#include <cmath>
#include <vector>

#include "cmorrey/quadrature.hpp"

namespace cmorrey::kernels {

namespace {

template <class Term>
double chunk_sum(std::size_t begin, std::size_t end, const Term& term) {
  std::array<double, kChunk> buf;
  std::size_t m = end - begin;
  for (std::size_t i = 0; i < m; ++i) buf[i] = term(begin + i);
  return pairwise_sum(std::span<const double>(buf.data(), m));
}

template <class Term>
double reduce(std::size_t n, const Term& term, bool parallel) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long c = 0; c < static_cast<long>(chunks); ++c) {
      std::size_t b = c * kChunk;
      partial[c] = chunk_sum(b, std::min(n, b + kChunk), term);
    }
  } else {
    for (std::size_t c = 0; c < chunks; ++c) {
      std::size_t b = c * kChunk;
      partial[c] = chunk_sum(b, std::min(n, b + kChunk), term);
    }
  }
  return pairwise_sum(partial);
}

double modular_impl(std::span<const double> la, std::span<const double> p, std::span<const double> w,
                    double log_eta, bool parallel) {
  auto term = [&](std::size_t i) { return w[i] * std::exp(p[i] * (la[i] - log_eta)); };
  return reduce(la.size(), term, parallel);
}

double weighted_impl(std::span<const double> v, std::span<const double> w, bool parallel) {
  auto term = [&](std::size_t i) { return v[i] * w[i]; };
  return reduce(v.size(), term, parallel);
}

}  // namespace

double modular_sum(std::span<const double> log_abs, std::span<const double> expo,
                   std::span<const double> w, double log_eta) {
  return modular_impl(log_abs, expo, w, log_eta, true);
}

double weighted_sum(std::span<const double> values, std::span<const double> w) {
  return weighted_impl(values, w, true);
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

namespace reference {

double modular_sum(std::span<const double> log_abs, std::span<const double> expo,
                   std::span<const double> w, double log_eta) {
  return modular_impl(log_abs, expo, w, log_eta, false);
}

double weighted_sum(std::span<const double> values, std::span<const double> w) {
  return weighted_impl(values, w, false);
}

}  // namespace reference

}  // namespace cmorrey::kernels
