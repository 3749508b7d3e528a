// Deterministic, addressable random streams built on SplitMix64.
//
// Every sampler in the library is a pure function of (parameters, Seed).
// A Seed names a stream; draw k of a stream is splitmix64(state + k*phi),
// so any draw is addressable by counter without sequential generation and
// parallel consumers agree bit-for-bit regardless of thread count.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace rmt {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Names one random stream. Identical (master, stream) reproduce identical
// byte streams; distinct stream indices give independent streams.
struct Seed {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  // 64-bit state initializer of the stream: SplitMix64 of master + stream*phi.
  std::uint64_t key() const { return splitmix64(master + stream * kGoldenGamma); }

  // Child stream, for samplers that fan out (entries, replicas, vertices).
  Seed sub(std::uint64_t index) const { return Seed{key(), index}; }
};

// Counter-based generator over one stream. at(k) is a pure function of
// (seed, k); next() walks the counter sequentially.
class Rng {
 public:
  explicit Rng(Seed s) : state_(s.key()) {}

  std::uint64_t at(std::uint64_t k) const { return splitmix64(state_ + (k + 1) * kGoldenGamma); }
  std::uint64_t next() { return at(counter_++); }

  // Uniform on (0,1]; never returns 0, so logs and inverse-CDF powers are safe.
  double uniform() { return ((next() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform on [0,1).
  double uniform_co() { return (next() >> 11) * 0x1.0p-53; }

  bool coin() { return next() & 1; }

  double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

  // Standard real normal, Box-Muller (one value per call, no cached state).
  double normal() {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    return r * std::cos(2.0 * M_PI * uniform());
  }

  // Complex gaussian with mean 0 and E|z|^2 = 1 (real/imag variance 1/2 each).
  std::complex<double> complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double th = 2.0 * M_PI * uniform();
    return {r * std::cos(th), r * std::sin(th)};
  }

  // Gamma(k,1) for integer shape, as a sum of unit exponentials.
  double gamma_int(std::uint64_t k) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < k; ++i) acc += exponential();
    return acc;
  }

 private:
  std::uint64_t state_;
  std::uint64_t counter_ = 0;
};

// Positive one-sided stable variable, Kanter's representation.
// E exp(-x T) = exp(-x^rho) for 0 < rho < 1.
inline double stable_unit(double rho, Rng& g) {
  const double th = M_PI * g.uniform();
  const double w = g.exponential();
  const double a = std::pow(std::sin(rho * th), rho / (1.0 - rho)) *
                   std::sin((1.0 - rho) * th) /
                   std::pow(std::sin(th), 1.0 / (1.0 - rho));
  return std::pow(a / w, (1.0 - rho) / rho);
}

}  // namespace rmt
