#pragma once

// Counter-based random numbers. Every draw is a pure function of
// (key, counter), so streams are reproducible across platforms and can be
// split by deriving child keys. The standard <random> distributions are not
// used because their output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace drd {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(splitmix64(key)) {}

  /// Independent stream keyed by this stream's key and `tags`.
  CounterRng derive(std::initializer_list<std::uint64_t> tags) const {
    std::uint64_t key = key_;
    for (std::uint64_t tag : tags) key = splitmix64(key ^ splitmix64(tag));
    return CounterRng(key, 0);
  }

  std::uint64_t next_u64() { return splitmix64(key_ ^ splitmix64(counter_++)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n) by rejection (unbiased). Requires n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (one value per call).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  CounterRng(std::uint64_t key, int) : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace drd
