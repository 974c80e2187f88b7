#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "expmoment/detail/summation.hpp"
#include "expmoment/error.hpp"

namespace expmoment {

/// Non-negative amplitudes a_n paired with real frequencies phi_n, the data of
/// the exponential sum S(t) = sum a_n exp(i t phi_n). Immutable once built.
class Instance {
 public:
  /// Validating constructor; see validate_instance.
  Instance(std::vector<double> amplitudes, std::vector<double> frequencies)
      : amplitudes_(std::move(amplitudes)), frequencies_(std::move(frequencies)) {
    if (amplitudes_.empty() && frequencies_.empty()) {
      throw Error(ErrorKind::Empty, "instance needs at least one term");
    }
    if (amplitudes_.size() != frequencies_.size()) {
      throw Error(ErrorKind::LengthMismatch, std::to_string(amplitudes_.size()) + " amplitudes vs " +
                                                 std::to_string(frequencies_.size()) + " frequencies");
    }
    for (std::size_t n = 0; n < amplitudes_.size(); ++n) {
      if (!std::isfinite(amplitudes_[n]) || !std::isfinite(frequencies_[n])) {
        throw Error(ErrorKind::NonFinite, "term " + std::to_string(n) + " is not finite");
      }
      if (amplitudes_[n] < 0.0) {
        throw Error(ErrorKind::NegativeAmplitude,
                    "amplitude " + std::to_string(n) + " is negative; the lower bound needs a_n >= 0");
      }
    }
  }

  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const double> amplitudes() const noexcept { return amplitudes_; }
  std::span<const double> frequencies() const noexcept { return frequencies_; }

  double amplitude(std::size_t n) const { return amplitudes_[n]; }
  std::complex<double> coefficient(std::size_t n) const { return {amplitudes_[n], 0.0}; }
  double frequency(std::size_t n) const { return frequencies_[n]; }

  bool all_zero() const noexcept {
    for (double a : amplitudes_)
      if (a != 0.0) return false;
    return true;
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<double> amplitudes_;
  std::vector<double> frequencies_;
};

inline Instance validate_instance(std::vector<double> amplitudes, std::vector<double> frequencies) {
  return Instance(std::move(amplitudes), std::move(frequencies));
}

/// Complex coefficients c_n with |c_n| <= a_n for a dominating instance; the
/// frequencies are those of the dominating instance.
class ComplexCoefficients {
 public:
  static constexpr double kDominationTolerance = 1e-12;

  ComplexCoefficients(std::vector<std::complex<double>> values, Instance dominating)
      : values_(std::move(values)), dominating_(std::move(dominating)) {
    if (values_.size() != dominating_.size()) {
      throw Error(ErrorKind::LengthMismatch, "coefficient count differs from dominating instance");
    }
    for (std::size_t n = 0; n < values_.size(); ++n) {
      const double modulus = std::abs(values_[n]);
      if (!std::isfinite(modulus)) throw Error(ErrorKind::NonFinite, "coefficient " + std::to_string(n));
      const double a = dominating_.amplitude(n);
      if (modulus > a * (1.0 + kDominationTolerance)) {
        throw Error(ErrorKind::DominationViolated, "|c_" + std::to_string(n) + "| exceeds a_" + std::to_string(n));
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const std::complex<double>> values() const noexcept { return values_; }
  const Instance& dominating() const noexcept { return dominating_; }

  std::complex<double> coefficient(std::size_t n) const { return values_[n]; }
  double frequency(std::size_t n) const { return dominating_.frequency(n); }

 private:
  std::vector<std::complex<double>> values_;
  Instance dominating_;
};

/// Anything that looks like sum c_n exp(i t phi_n).
template <class S>
concept CoefficientSource = requires(const S& s, std::size_t n) {
  { s.size() } -> std::convertible_to<std::size_t>;
  { s.coefficient(n) } -> std::convertible_to<std::complex<double>>;
  { s.frequency(n) } -> std::convertible_to<double>;
};

/// Integration window [center - half_width, center + half_width].
struct Window {
  double center = 0.0;
  double half_width = 1.0;

  Window(double center_, double half_width_) : center(center_), half_width(half_width_) {
    if (!std::isfinite(center) || !std::isfinite(half_width)) throw Error(ErrorKind::NonFinite, "window");
    if (!(half_width > 0.0)) throw Error(ErrorKind::InvalidArgument, "window half-width must be positive");
  }

  static Window centered(double half_width) { return Window(0.0, half_width); }

  double lower() const noexcept { return center - half_width; }
  double upper() const noexcept { return center + half_width; }
};

/// The integer q of the 2q-th moment.
class MomentOrder {
 public:
  explicit MomentOrder(int q) : q_(q) {
    if (q < 1) throw Error(ErrorKind::InvalidArgument, "moment order q must be >= 1");
  }
  int value() const noexcept { return q_; }
  friend bool operator==(MomentOrder, MomentOrder) = default;

 private:
  int q_;
};

enum class MomentMethod { quadrature, spectral_exact, monte_carlo };

constexpr std::string_view to_string(MomentMethod m) noexcept {
  switch (m) {
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::spectral_exact: return "spectral_exact";
    case MomentMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

struct MomentResult {
  double value = 0.0;
  MomentMethod method = MomentMethod::quadrature;
  double error_estimate = 0.0;
  // Panels for quadrature, merged terms for spectral, samples for Monte Carlo.
  std::uint64_t work_count = 0;
};

/// sum a_n^2, compensated.
inline double energy(const Instance& instance) {
  detail::CompensatedSum s;
  for (double a : instance.amplitudes()) s += a * a;
  return s.value();
}

/// sum |c_n|, the sup bound of |S(t)| by the triangle inequality.
template <CoefficientSource S>
double l1_norm(const S& source) {
  detail::CompensatedSum s;
  for (std::size_t n = 0; n < source.size(); ++n) s += std::abs(std::complex<double>(source.coefficient(n)));
  return s.value();
}

namespace detail {

inline std::string short_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// Short human-readable description for reports.
template <CoefficientSource S>
std::string summarize(const S& source) {
  double lo = source.frequency(0), hi = source.frequency(0);
  for (std::size_t n = 1; n < source.size(); ++n) {
    lo = std::min(lo, source.frequency(n));
    hi = std::max(hi, source.frequency(n));
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "N=%zu phi=[%.6g,%.6g]", source.size(), lo, hi);
  return buf;
}

}  // namespace expmoment
