// rng.hpp — SplitMix64 stream with Box-Muller gaussians.
//
// All randomness in the library flows through this generator so that a
// 64-bit seed fully determines every generated state, sample and restart.
// SplitMix64 (Steele/Lea/Flood 2014) advances by a Weyl increment and
// applies a 64-bit finalizer; uniform doubles take the top 53 bits.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace ssalab {

/// SplitMix64 finalizer applied to an already-incremented word.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic child seed for substream `index` of a master seed.
/// Used for per-state, per-restart and per-sample streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x632BE59BD9B4E019ull));
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe under log().
  double uniform_pos() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard exponential via inversion.
  double exponential() { return -std::log(uniform_pos()); }

  /// Pair of independent standard gaussians (Box-Muller).
  std::pair<double, double> gaussian_pair() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }

  /// Standard complex gaussian: independent N(0,1) real and imaginary parts.
  std::complex<double> complex_gaussian() {
    auto [re, im] = gaussian_pair();
    return {re, im};
  }

  /// Uniform integer in [0, bound) by rejection-free scaling (bound small).
  int uniform_int(int bound) {
    return static_cast<int>(uniform() * static_cast<double>(bound));
  }

 private:
  std::uint64_t state_;
};

}  // namespace ssalab
