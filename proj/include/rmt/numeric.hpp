// Small numeric utilities shared across modules: deterministic summation,
// a deterministic parallel loop, shortest round-trip float formatting.

#pragma once

#include <charconv>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace rmt {

// Pairwise summation. Declared as the accumulation contract for every
// statistic the library aggregates: the result does not depend on how work
// was partitioned, only on element order.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  const std::size_t n = xs.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = xs[0];
    for (std::size_t i = 1; i < n; ++i) acc += xs[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& xs) {
  return pairwise_sum(std::span<const T>(xs));
}

template <typename T>
double pairwise_mean(const std::vector<T>& xs) {
  return xs.empty() ? 0.0 : pairwise_sum(std::span<const T>(xs)) / static_cast<double>(xs.size());
}

// Runs body(i) for i in [0, n). Each index writes only its own slots, so the
// result is identical for any thread count. threads == 0 picks the hardware
// concurrency.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

// Global default for parallel_for when threads == 0 is requested; the CLI
// sets this from --threads. Never changes results, only wall time.
void set_default_threads(unsigned threads);
unsigned default_threads();

// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double x);

// Least-squares line y = a + b x; returns {a, b}.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace rmt
