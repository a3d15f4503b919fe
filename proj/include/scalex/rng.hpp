#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace scalex {

/// Deterministic 64-bit generator (splitmix64). Hand-rolled so that seeded
/// results are bit-identical across platforms and standard libraries; the
/// std:: distributions make no such guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double next_uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (no state caching).
  double next_normal() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, n); n > 0. Multiply-high reduction, computed in
  /// 64-bit halves so the result is identical on every platform.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t x = next_u64();
    const std::uint64_t x_lo = x & 0xFFFFFFFFull, x_hi = x >> 32;
    const std::uint64_t n_lo = n & 0xFFFFFFFFull, n_hi = n >> 32;
    const std::uint64_t ll = x_lo * n_lo;
    const std::uint64_t lh = x_lo * n_hi;
    const std::uint64_t hl = x_hi * n_lo;
    const std::uint64_t mid = (ll >> 32) + (lh & 0xFFFFFFFFull) + (hl & 0xFFFFFFFFull);
    return x_hi * n_hi + (lh >> 32) + (hl >> 32) + (mid >> 32);
  }

  /// Independent substream for unit `index`, reproducible from (seed, index).
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    Rng mixer(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    return Rng(mixer.next_u64());
  }

 private:
  std::uint64_t state_;
};

/// Draws m of n indices without replacement; returned ascending so that
/// downstream arithmetic is order-independent.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m,
                                                           Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < m && i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m < n ? m : n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace scalex
