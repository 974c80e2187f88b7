#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "expmoment/core.hpp"
#include "expmoment/detail/multi_index.hpp"
#include "expmoment/detail/parallel.hpp"
#include "expmoment/detail/random.hpp"
#include "expmoment/detail/summation.hpp"
#include "expmoment/eval.hpp"

namespace expmoment {

// Moments E|sum eps_n z_n|^{2q} over independent uniform signs eps_n.

enum class RademacherMethod { exact_combinatorial, exhaustive, monte_carlo };

constexpr std::string_view to_string(RademacherMethod m) noexcept {
  switch (m) {
    case RademacherMethod::exact_combinatorial: return "exact_combinatorial";
    case RademacherMethod::exhaustive: return "exhaustive";
    case RademacherMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct RademacherMoment {
  double value = 0.0;
  RademacherMethod method = RademacherMethod::exact_combinatorial;
  std::uint64_t samples = 0;
  /// NaN when undefined (fewer than two samples).
  double std_error = std::numeric_limits<double>::quiet_NaN();
  bool std_error_defined() const noexcept { return !std::isnan(std_error); }
};

inline constexpr std::size_t kMaxExhaustiveSigns = 24;

/// E|sum eps_n z_n|^{2q} in closed form.
///
/// Expanding (sum eps z)^q (sum eps conj z)^q gives terms
/// M(k) M(h) prod z^k conj(z)^h E[prod eps^{k+h}], and the expectation is 1
/// exactly when every k_n + h_n is even, i.e. k and h share a parity pattern.
/// Grouping multi-indices by parity pattern p,
///   E = sum_p |sum_{k in p} M(k) prod z^k|^2.
inline double exact_even_moment(std::span<const std::complex<double>> z, MomentOrder q,
                                std::uint64_t term_budget = 100'000'000) {
  const std::size_t N = z.size();
  if (N == 0) return 0.0;
  const std::uint64_t pairs = detail::saturating_square(detail::composition_count(N, q.value()));
  if (pairs > term_budget) {
    throw Error(ErrorKind::TermBudgetExceeded, "multi-index pairs exceed the term budget");
  }
  const auto indices = detail::enumerate_compositions(N, q.value());
  const detail::PowerTable powers([&](std::size_t n) { return z[n]; }, N, q.value());
  const bool exact = q.value() <= detail::kExactWeightMaxOrder;

  const std::size_t words = (N + 63) / 64;
  std::map<std::vector<std::uint64_t>, detail::CompensatedComplexSum> groups;
  std::vector<std::uint64_t> parity(words);
  for (const auto& mi : indices) {
    std::fill(parity.begin(), parity.end(), 0);
    for (std::size_t n = 0; n < N; ++n)
      if (mi.k[n] & 1) parity[n / 64] |= std::uint64_t{1} << (n % 64);
    const double weight = exact ? static_cast<double>(mi.multinomial) : std::exp(mi.log_multinomial);
    groups[parity] += weight * powers.monomial(mi.k);
  }
  detail::CompensatedSum total;
  for (const auto& [key, sum] : groups) total += std::norm(sum.value());
  return total.value();
}

/// Average of |sum eps_n z_n|^{2q} over all 2^N sign vectors.
inline double exhaustive_moment(std::span<const std::complex<double>> z, MomentOrder q) {
  const std::size_t N = z.size();
  if (N > kMaxExhaustiveSigns) {
    throw Error(ErrorKind::TooManySigns, std::to_string(N) + " signs exceed the exhaustive limit of 24");
  }
  if (N == 0) return 0.0;
  const std::uint64_t vectors = std::uint64_t{1} << N;
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (vectors + kBlock - 1) / kBlock;
  std::vector<detail::CompensatedSum> partial(blocks);
  detail::parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t end = std::min(vectors, (b + 1) * kBlock);
    for (std::uint64_t mask = b * kBlock; mask < end; ++mask) {
      detail::CompensatedSum re, im;
      for (std::size_t n = 0; n < N; ++n) {
        const double s = (mask >> n) & 1 ? -1.0 : 1.0;
        re += s * z[n].real();
        im += s * z[n].imag();
      }
      partial[b] += detail::modulus_power({re.value(), im.value()}, q.value());
    }
  }, 1);
  detail::CompensatedSum total;
  for (const auto& p : partial) total += p;
  return total.value() / static_cast<double>(vectors);
}

/// Sample mean of |sum eps z|^{2q}. Sample i draws its signs from a stream
/// keyed by (seed, i), so the result is independent of scheduling.
inline RademacherMoment monte_carlo_moment(std::span<const std::complex<double>> z, MomentOrder q,
                                           std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "monte_carlo_moment needs samples >= 1");
  const std::size_t N = z.size();
  constexpr std::uint64_t kBlock = 8192;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  struct Partial {
    detail::CompensatedSum sum, sum_sq;
  };
  std::vector<Partial> partial(blocks);
  detail::parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t end = std::min(samples, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      detail::CounterRng rng(seed, i);
      std::uint64_t bits = 0;
      detail::CompensatedSum re, im;
      for (std::size_t n = 0; n < N; ++n) {
        if (n % 64 == 0) bits = rng.next();
        const double s = (bits >> (n % 64)) & 1 ? -1.0 : 1.0;
        re += s * z[n].real();
        im += s * z[n].imag();
      }
      const double x = detail::modulus_power({re.value(), im.value()}, q.value());
      partial[b].sum += x;
      partial[b].sum_sq += x * x;
    }
  }, 1);
  detail::CompensatedSum sum, sum_sq;
  for (const auto& p : partial) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  RademacherMoment result;
  result.method = RademacherMethod::monte_carlo;
  result.samples = samples;
  const double n = static_cast<double>(samples);
  result.value = sum.value() / n;
  if (samples >= 2) {
    const double variance = std::max(0.0, (sum_sq.value() - n * result.value * result.value) / (n - 1.0));
    result.std_error = std::sqrt(variance / n);
  }
  return result;
}

struct KhintchineScan {
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::uint64_t trials = 0;
  /// (2q-1)!!, the Gaussian moment ratio. Observational only; it is not a
  /// proven ceiling for complex vectors.
  double gaussian_ceiling = 1.0;
};

/// Ratios E|sum eps z|^{2q} / (sum |z|^2)^q over random complex Gaussian
/// vectors with dimension drawn from [min_dim, max_dim].
inline KhintchineScan khintchine_ratio_scan(MomentOrder q, std::uint64_t trials, std::size_t min_dim,
                                            std::size_t max_dim, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "khintchine_ratio_scan needs trials >= 1");
  if (min_dim < 1 || max_dim < min_dim) throw Error(ErrorKind::InvalidArgument, "bad dimension range");
  KhintchineScan scan;
  scan.trials = trials;
  for (int j = 1; j <= q.value(); ++j) scan.gaussian_ceiling *= 2.0 * j - 1.0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    detail::CounterRng rng(seed, trial);
    const auto dim = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(min_dim),
                                                          static_cast<std::int64_t>(max_dim)));
    std::vector<std::complex<double>> z(dim);
    detail::CompensatedSum norm2;
    for (auto& zn : z) {
      zn = {rng.normal(), rng.normal()};
      norm2 += std::norm(zn);
    }
    const double ratio = exact_even_moment(z, q) / std::pow(norm2.value(), q.value());
    scan.min_ratio = std::min(scan.min_ratio, ratio);
    scan.max_ratio = std::max(scan.max_ratio, ratio);
  }
  return scan;
}

}  // namespace expmoment
