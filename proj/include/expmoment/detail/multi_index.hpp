#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace expmoment::detail {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

/// Number of k in N^N with k_1 + ... + k_N = q, i.e. C(N + q - 1, q);
/// saturates at UINT64_MAX.
inline std::uint64_t composition_count(std::size_t N, int q) {
  unsigned __int128 c = 1;
  for (int j = 1; j <= q; ++j) {
    c = c * (N - 1 + static_cast<unsigned>(j)) / static_cast<unsigned>(j);
    if (c > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(c);
}

inline std::uint64_t saturating_square(std::uint64_t x) {
  const unsigned __int128 sq = static_cast<unsigned __int128>(x) * x;
  return sq > kSaturated ? kSaturated : static_cast<std::uint64_t>(sq);
}

/// Largest q for which every multinomial q!/prod k_n! fits in 64 bits and
/// products of two of them fit in 128 bits.
inline constexpr int kExactWeightMaxOrder = 20;

/// One multi-index k with |k| = q together with its multinomial weight
/// q!/prod k_n!, held exactly for small q and as a logarithm otherwise.
struct MultiIndex {
  std::vector<int> k;
  std::uint64_t multinomial = 0;  // valid when exact
  double log_multinomial = 0.0;
};

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return static_cast<std::uint64_t>(r);
}

/// Every composition of q into N non-negative parts, in reverse
/// lexicographic order starting from (q, 0, ..., 0).
inline std::vector<MultiIndex> enumerate_compositions(std::size_t N, int q) {
  std::vector<MultiIndex> out;
  const std::uint64_t count = composition_count(N, q);
  if (count != kSaturated) out.reserve(count);
  const bool exact = q <= kExactWeightMaxOrder;
  const double log_q_factorial = std::lgamma(q + 1.0);
  std::vector<int> k(N, 0);
  auto emit = [&] {
    MultiIndex mi;
    mi.k = k;
    if (exact) {
      std::uint64_t m = 1, running = 0;
      for (int kn : k) {
        running += static_cast<std::uint64_t>(kn);
        m *= binomial_u64(running, static_cast<std::uint64_t>(kn));
      }
      mi.multinomial = m;
      mi.log_multinomial = std::log(static_cast<double>(m));
    } else {
      double lm = log_q_factorial;
      for (int kn : k) lm -= std::lgamma(kn + 1.0);
      mi.log_multinomial = lm;
    }
    out.push_back(std::move(mi));
  };
  auto recurse = [&](auto&& self, std::size_t pos, int remaining) -> void {
    if (pos + 1 == N) {
      k[pos] = remaining;
      emit();
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      k[pos] = v;
      self(self, pos + 1, remaining - v);
    }
    k[pos] = 0;
  };
  recurse(recurse, 0, q);
  return out;
}

/// Table of c^j for j = 0..q, row n holding powers of c_n.
class PowerTable {
 public:
  template <class Coefficients>
  PowerTable(const Coefficients& c, std::size_t N, int q) : q_(q), table_(N * (q + 1)) {
    for (std::size_t n = 0; n < N; ++n) {
      std::complex<double> p = 1.0;
      table_[n * (q + 1)] = p;
      for (int j = 1; j <= q; ++j) {
        p *= std::complex<double>(c(n));
        table_[n * (q + 1) + j] = p;
      }
    }
  }

  std::complex<double> power(std::size_t n, int j) const { return table_[n * (q_ + 1) + j]; }

  /// prod_n c_n^{k_n}
  std::complex<double> monomial(std::span<const int> k) const {
    std::complex<double> p = 1.0;
    for (std::size_t n = 0; n < k.size(); ++n)
      if (k[n] != 0) p *= power(n, k[n]);
    return p;
  }

 private:
  int q_;
  std::vector<std::complex<double>> table_;
};

}  // namespace expmoment::detail
