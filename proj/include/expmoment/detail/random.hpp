#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace expmoment::detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator: the stream is a pure function of (seed, key),
/// so any sub-stream can be regenerated independently of the others.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t key = 0) noexcept
      : base_(splitmix64(seed ^ splitmix64(key + 0x632be59bd9b4e019ULL))) {}

  constexpr std::uint64_t next() noexcept { return splitmix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) noexcept {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next() % span);
  }

  double log_uniform(double lo, double hi) noexcept { return std::exp(uniform(std::log(lo), std::log(hi))); }

  /// Standard normal via Box-Muller (one variate per call).
  double normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace expmoment::detail
