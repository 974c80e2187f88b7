#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "expmoment/core.hpp"
#include "expmoment/detail/parallel.hpp"
#include "expmoment/detail/summation.hpp"

namespace expmoment {

/// Strictly increasing, finite sample points.
class EvaluationGrid {
 public:
  EvaluationGrid() = default;

  explicit EvaluationGrid(std::vector<double> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i])) throw Error(ErrorKind::NonFinite, "grid point");
      if (i > 0 && !(points_[i] > points_[i - 1])) {
        throw Error(ErrorKind::InvalidArgument, "grid must be strictly increasing");
      }
    }
  }

  /// `count` equispaced points covering [lo, hi] inclusive.
  static EvaluationGrid uniform(double lo, double hi, std::size_t count) {
    std::vector<double> pts;
    pts.reserve(count);
    if (count == 1) {
      pts.push_back(lo);
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
      }
    }
    return EvaluationGrid(std::move(pts));
  }

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

 private:
  std::vector<double> points_;
};

/// S(t) = sum c_n exp(i t phi_n), one sin/cos per term.
template <CoefficientSource S>
std::complex<double> eval_sum(const S& source, double t) {
  detail::CompensatedSum re, im;
  for (std::size_t n = 0; n < source.size(); ++n) {
    const std::complex<double> c = source.coefficient(n);
    const double x = t * source.frequency(n);
    const double cs = std::cos(x), sn = std::sin(x);
    re += c.real() * cs;
    re += -c.imag() * sn;
    im += c.real() * sn;
    im += c.imag() * cs;
  }
  return {re.value(), im.value()};
}

namespace detail {

/// (re^2 + im^2)^q by repeated squaring; exact integer power.
inline double modulus_power(std::complex<double> z, int q) {
  double base = z.real() * z.real() + z.imag() * z.imag();
  double result = 1.0;
  for (int e = q; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

}  // namespace detail

/// Rejects sources whose sup bound (sum |c_n|)^{2q} would leave the double
/// range; amplitudes can be rescaled since the moment is homogeneous.
template <CoefficientSource S>
void check_power_range(const S& source, MomentOrder q) {
  const double bound = l1_norm(source);
  const double limit = std::pow(10.0, 300.0 / (2.0 * q.value()));
  if (bound > limit) {
    throw Error(ErrorKind::Overflow, "sum of |c_n| exceeds 10^(300/2q); rescale the amplitudes");
  }
}

/// |S(t)|^{2q}.
template <CoefficientSource S>
double eval_power(const S& source, double t, MomentOrder q) {
  check_power_range(source, q);
  return detail::modulus_power(eval_sum(source, t), q.value());
}

/// eval_power over every grid point, order preserved. Points are evaluated
/// independently so the parallel result matches the sequential one bit for bit.
template <CoefficientSource S>
std::vector<double> eval_batch(const S& source, const EvaluationGrid& grid, MomentOrder q) {
  check_power_range(source, q);
  std::vector<double> out(grid.size());
  const auto pts = grid.points();
  detail::parallel_for(pts.size(), [&](std::size_t i) {
    out[i] = detail::modulus_power(eval_sum(source, pts[i]), q.value());
  }, 1024);
  return out;
}

}  // namespace expmoment
