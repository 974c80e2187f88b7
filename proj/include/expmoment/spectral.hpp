#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "expmoment/core.hpp"
#include "expmoment/eval.hpp"
#include "expmoment/fejer.hpp"
#include "expmoment/detail/multi_index.hpp"
#include "expmoment/detail/summation.hpp"

namespace expmoment {

// Exact expansion of |S(t)|^{2q}:
//
//   |sum c_n e^{i t phi_n}|^{2q}
//     = sum_{|k|=|h|=q} (q!)^2 / (k! h!) prod c_n^{k_n} conj(c_n)^{h_n} e^{i t omega(k,h)},
//   omega(k,h) = sum (k_n - h_n) phi_n.
//
// The weight factors as M(k) M(h) with M(k) = q!/prod k_n!, so every pair is
// built from two cached per-index quantities. Pairs are streamed into an
// omega-keyed map; nothing beyond the merged terms is stored.

struct SpectralTerm {
  double omega = 0.0;
  std::complex<double> coeff;
};

enum class WeightArithmetic { exact_integer, log_space };

constexpr std::string_view to_string(WeightArithmetic w) noexcept {
  return w == WeightArithmetic::exact_integer ? "exact_integer" : "log_space";
}

struct SpectralExpansion {
  std::vector<SpectralTerm> terms;  // ascending omega
  int q = 1;
  /// Source coefficients were real and non-negative.
  bool real_source = false;
  /// Omegas were computed and merged in integer arithmetic.
  bool exact_omegas = false;
  WeightArithmetic weights = WeightArithmetic::exact_integer;
  std::uint64_t pair_count = 0;
  double merge_tol = 0.0;
  /// |S(0)|^{2q} by direct evaluation, for the Parseval-at-zero check.
  double direct_value_at_zero = 0.0;
  std::variant<Instance, ComplexCoefficients> source;

  /// sum of coefficients, i.e. the expansion evaluated at t = 0.
  std::complex<double> coefficient_sum() const {
    detail::CompensatedComplexSum s;
    for (const auto& term : terms) s += term.coeff;
    return s.value();
  }
};

struct ExpandOptions {
  /// NaN selects default_merge_tol.
  double merge_tol = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t term_budget = 100'000'000;
};

/// C(N+q-1, q)^2 pairs, saturating.
inline std::uint64_t expansion_pair_count(std::size_t N, MomentOrder q) {
  return detail::saturating_square(detail::composition_count(N, q.value()));
}

template <class S>
concept ExpandableSource = std::is_same_v<S, Instance> || std::is_same_v<S, ComplexCoefficients>;

/// 1e-9 * max(1, q * max|phi_n|).
template <CoefficientSource S>
double default_merge_tol(const S& source, MomentOrder q) {
  double max_abs = 0.0;
  for (std::size_t n = 0; n < source.size(); ++n) max_abs = std::max(max_abs, std::abs(source.frequency(n)));
  return 1e-9 * std::max(1.0, q.value() * max_abs);
}

namespace detail {

struct IndexData {
  std::complex<double> monomial;  // prod c_n^{k_n}
  double omega = 0.0;
  std::int64_t exact_omega = 0;
  std::uint64_t multinomial = 0;
  double log_multinomial = 0.0;
};

template <ExpandableSource S>
std::vector<IndexData> index_data(const S& source, MomentOrder q, bool integer_omegas) {
  const std::size_t N = source.size();
  const auto indices = enumerate_compositions(N, q.value());
  const PowerTable powers([&](std::size_t n) { return source.coefficient(n); }, N, q.value());
  std::vector<IndexData> out;
  out.reserve(indices.size());
  for (const auto& mi : indices) {
    IndexData d;
    d.monomial = powers.monomial(mi.k);
    d.multinomial = mi.multinomial;
    d.log_multinomial = mi.log_multinomial;
    CompensatedSum omega;
    for (std::size_t n = 0; n < N; ++n) {
      if (mi.k[n] == 0) continue;
      omega += mi.k[n] * source.frequency(n);
      if (integer_omegas) d.exact_omega += mi.k[n] * static_cast<std::int64_t>(source.frequency(n));
    }
    d.omega = omega.value();
    out.push_back(d);
  }
  return out;
}

template <ExpandableSource S>
void check_budget(const S& source, MomentOrder q, std::uint64_t budget) {
  const std::uint64_t pairs = expansion_pair_count(source.size(), q);
  if (pairs > budget) {
    throw Error(ErrorKind::TermBudgetExceeded, std::to_string(pairs == kSaturated ? 0 : pairs) +
                                                   " index pairs exceed the budget of " + std::to_string(budget));
  }
}

inline double pair_weight(const IndexData& k, const IndexData& h, bool exact) {
  if (exact) {
    return static_cast<double>(static_cast<unsigned __int128>(k.multinomial) * h.multinomial);
  }
  return std::exp(k.log_multinomial + h.log_multinomial);
}

template <ExpandableSource S>
SpectralExpansion make_header(const S& source, MomentOrder q) {
  SpectralExpansion e{.q = q.value(), .source = source};
  e.real_source = std::is_same_v<S, Instance>;
  e.weights = q.value() <= kExactWeightMaxOrder ? WeightArithmetic::exact_integer : WeightArithmetic::log_space;
  e.direct_value_at_zero = modulus_power(eval_sum(source, 0.0), q.value());
  return e;
}

/// Re(sum) after verifying that the imaginary part is rounding noise relative
/// to the value and to the magnitude of the summands.
inline double checked_real(std::complex<double> total, double magnitude, const char* what) {
  const double allowed = 1e-9 * std::abs(total.real()) + 1e-12 * magnitude;
  if (std::abs(total.imag()) > allowed) {
    throw Error(ErrorKind::ImaginaryResidue,
                std::string(what) + ": imaginary residue " + std::to_string(total.imag()) + " vs value " +
                    std::to_string(total.real()));
  }
  return total.real();
}

}  // namespace detail

/// Expands |S(t)|^{2q} into merged (omega, coeff) terms; omegas closer than
/// merge_tol to an existing term are folded into it.
template <ExpandableSource S>
SpectralExpansion expand(const S& source, MomentOrder q, const ExpandOptions& opts = {}) {
  detail::check_budget(source, q, opts.term_budget);
  check_power_range(source, q);
  SpectralExpansion e = detail::make_header(source, q);
  e.merge_tol = std::isnan(opts.merge_tol) ? default_merge_tol(source, q) : opts.merge_tol;
  const bool exact = e.weights == WeightArithmetic::exact_integer;
  const auto data = detail::index_data(source, q, false);

  std::map<double, detail::CompensatedComplexSum> merged;
  for (const auto& k : data) {
    for (const auto& h : data) {
      const double omega = k.omega - h.omega;
      const std::complex<double> coeff = detail::pair_weight(k, h, exact) * (k.monomial * std::conj(h.monomial));
      ++e.pair_count;
      auto it = merged.lower_bound(omega - e.merge_tol);
      if (it != merged.end() && it->first <= omega + e.merge_tol) {
        it->second += coeff;
      } else {
        merged.emplace_hint(it, omega, detail::CompensatedComplexSum{})->second += coeff;
      }
    }
  }
  e.terms.reserve(merged.size());
  for (const auto& [omega, sum] : merged) e.terms.push_back({omega, sum.value()});
  return e;
}

/// Expansion for integer frequencies: omegas are exact integers and only
/// identical omegas merge.
template <ExpandableSource S>
SpectralExpansion rational_mode_expand(const S& source, MomentOrder q, std::uint64_t term_budget = 100'000'000) {
  constexpr double kLimit = 0x1.0p52;
  double max_abs = 0.0;
  for (std::size_t n = 0; n < source.size(); ++n) {
    const double phi = source.frequency(n);
    if (phi != std::trunc(phi) || std::abs(phi) >= kLimit) {
      throw Error(ErrorKind::NotInteger, "frequency " + std::to_string(n) + " is not an integer");
    }
    max_abs = std::max(max_abs, std::abs(phi));
  }
  if (2.0 * q.value() * max_abs >= kLimit) {
    throw Error(ErrorKind::NotInteger, "integer omegas would exceed 2^52");
  }
  detail::check_budget(source, q, term_budget);
  check_power_range(source, q);
  SpectralExpansion e = detail::make_header(source, q);
  e.exact_omegas = true;
  const bool exact = e.weights == WeightArithmetic::exact_integer;
  const auto data = detail::index_data(source, q, true);

  std::map<std::int64_t, detail::CompensatedComplexSum> merged;
  for (const auto& k : data) {
    for (const auto& h : data) {
      ++e.pair_count;
      merged[k.exact_omega - h.exact_omega] += detail::pair_weight(k, h, exact) * (k.monomial * std::conj(h.monomial));
    }
  }
  e.terms.reserve(merged.size());
  for (const auto& [omega, sum] : merged) e.terms.push_back({static_cast<double>(omega), sum.value()});
  return e;
}

/// 2 sin(omega T) / omega, with its limit 2T near omega = 0.
inline double window_transform(double omega, double half_width) {
  const double x = omega * half_width;
  if (std::abs(x) < 1e-6) return 2.0 * half_width * (1.0 - x * x / 6.0);
  return 2.0 * std::sin(x) / omega;
}

/// Raw integral of |S|^{2q} over the window (not normalized by 2T).
inline double integral_exact(const SpectralExpansion& e, const Window& window) {
  detail::CompensatedComplexSum total;
  detail::CompensatedSum magnitude;
  for (const auto& term : e.terms) {
    const double g = window_transform(term.omega, window.half_width);
    const std::complex<double> phase = window.center == 0.0
                                           ? std::complex<double>(1.0, 0.0)
                                           : std::polar(1.0, term.omega * window.center);
    total += term.coeff * phase * g;
    magnitude += std::abs(term.coeff) * std::abs(g);
  }
  return detail::checked_real(total.value(), magnitude.value(), "integral_exact");
}

/// integral_exact / 2T as a MomentResult.
inline MomentResult windowed_average_exact(const SpectralExpansion& e, const Window& window) {
  const double value = integral_exact(e, window) / (2.0 * window.half_width);
  return {std::max(0.0, value), MomentMethod::spectral_exact, 0.0, e.terms.size()};
}

/// Effective resonance tolerance: the merge tolerance unless given, and 0
/// for exact-omega expansions.
inline double resonance_tolerance(const SpectralExpansion& e, double tol) {
  if (e.exact_omegas) return 0.0;
  return std::isnan(tol) ? e.merge_tol : tol;
}

/// T -> infinity average of |S|^{2q}: the sum of coefficients at |omega| <= tol.
inline double limit_moment(const SpectralExpansion& e, double resonance_tol = std::numeric_limits<double>::quiet_NaN()) {
  const double tol = resonance_tolerance(e, resonance_tol);
  detail::CompensatedComplexSum s;
  for (const auto& term : e.terms)
    if (std::abs(term.omega) <= tol) s += term.coeff;
  return s.value().real();
}

/// Smallest |omega| above the resonance tolerance; infinity if none. The
/// finite-T average approaches limit_moment at rate about 1/(T * gap).
inline double resonance_gap(const SpectralExpansion& e, double resonance_tol = std::numeric_limits<double>::quiet_NaN()) {
  const double tol = resonance_tolerance(e, resonance_tol);
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& term : e.terms)
    if (std::abs(term.omega) > tol) gap = std::min(gap, std::abs(term.omega));
  return gap;
}

/// Exact value of int K_T(t - H) |S(t)|^{2q} dt:
/// sum coeff * e^{i omega H} * Khat_T(omega).
inline double fejer_weighted_exact(const SpectralExpansion& e, const KernelParams& kernel) {
  detail::CompensatedComplexSum total;
  detail::CompensatedSum magnitude;
  for (const auto& term : e.terms) {
    const double khat = kernel_hat(kernel, term.omega);
    const std::complex<double> phase =
        kernel.shift == 0.0 ? std::complex<double>(1.0, 0.0) : std::polar(1.0, term.omega * kernel.shift);
    total += term.coeff * phase * khat;
    magnitude += std::abs(term.coeff) * khat;
  }
  return detail::checked_real(total.value(), magnitude.value(), "fejer_weighted_exact");
}

/// CSV dump: header then one "omega,coeff_re,coeff_im" row per term.
inline void write_expansion_csv(const SpectralExpansion& e, std::ostream& out) {
  out << "omega,coeff_re,coeff_im\n";
  char buf[128];
  for (const auto& term : e.terms) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", term.omega, term.coeff.real(), term.coeff.imag());
    out << buf;
  }
}

}  // namespace expmoment
