#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "expmoment/core.hpp"
#include "expmoment/eval.hpp"
#include "expmoment/fejer.hpp"
#include "expmoment/detail/parallel.hpp"
#include "expmoment/detail/summation.hpp"

namespace expmoment {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  std::uint64_t max_panels = std::uint64_t{1} << 20;
  int gauss_order = 16;
  /// Extra absolute acceptance threshold; 0 leaves only the relative test
  /// and the rounding floor.
  double abs_tol = 0.0;

  void validate() const {
    if (!(rel_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "rel_tol must be positive");
    if (gauss_order < 2) throw Error(ErrorKind::InvalidArgument, "gauss_order must be >= 2");
    if (max_panels < 1) throw Error(ErrorKind::InvalidArgument, "max_panels must be >= 1");
  }
};

/// Thrown when panel doubling hits max_panels before meeting rel_tol. The
/// best available estimate travels with the exception.
class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& what, MomentResult best)
      : Error(ErrorKind::NotConverged, what), best_(best) {}
  const MomentResult& best() const noexcept { return best_; }

 private:
  MomentResult best_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order) : nodes_(order), weights_(order) {
    const int n = order;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      // Recompute the derivative at the converged node for the weight.
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes_[i] = -x;
      nodes_[n - 1 - i] = x;
      weights_[i] = w;
      weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes_[n / 2] = 0.0;
  }

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
    return half * s.value();
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// q * (max phi - min phi): the highest frequency present in |S|^{2q}.
template <CoefficientSource S>
double bandlimit(const S& source, MomentOrder q) {
  double lo = source.frequency(0), hi = source.frequency(0);
  for (std::size_t n = 1; n < source.size(); ++n) {
    lo = std::min(lo, source.frequency(n));
    hi = std::max(hi, source.frequency(n));
  }
  return q.value() * (hi - lo);
}

/// Panel width used for a band-limited integrand on an interval of length L:
/// min(L, pi / B), i.e. one half-oscillation of the fastest component.
inline double panel_width(double length, double bandwidth) {
  const double eps = std::numeric_limits<double>::min();
  return std::min(length, std::numbers::pi / std::max(bandwidth, eps));
}

namespace detail {

struct CompositeEstimate {
  double value = 0.0;
  double error = 0.0;
  std::uint64_t panels = 0;
  bool converged = false;
};

template <class F>
double composite_sum(const F& f, const GaussLegendreRule& rule, double a, double b, std::uint64_t panels) {
  std::vector<double> partial(panels);
  const double h = (b - a) / static_cast<double>(panels);
  parallel_for(panels, [&](std::size_t i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i + 1 == panels) ? b : a + h * static_cast<double>(i + 1);
    partial[i] = rule.integrate(f, lo, hi);
  }, 64);
  CompensatedSum total;
  for (double p : partial) total += p;
  return total.value();
}

// Composite Gauss-Legendre over [a, b] with uniform panels no wider than
// pi / bandwidth, doubled until two successive sums agree.
template <class F>
CompositeEstimate integrate_banded(const F& f, double a, double b, double bandwidth, const QuadratureConfig& cfg,
                                   double abs_floor) {
  cfg.validate();
  const GaussLegendreRule rule(cfg.gauss_order);
  const double length = b - a;
  auto panels = static_cast<std::uint64_t>(std::ceil(length / panel_width(length, bandwidth) - 1e-12));
  panels = std::max<std::uint64_t>(panels, 1);
  CompositeEstimate est;
  if (panels > cfg.max_panels) {
    est.value = composite_sum(f, rule, a, b, cfg.max_panels);
    est.error = std::numeric_limits<double>::infinity();
    est.panels = cfg.max_panels;
    return est;
  }
  double previous = composite_sum(f, rule, a, b, panels);
  while (true) {
    if (panels * 2 > cfg.max_panels) {
      est.value = previous;
      est.error = std::numeric_limits<double>::infinity();
      est.panels = panels;
      return est;
    }
    panels *= 2;
    const double current = composite_sum(f, rule, a, b, panels);
    const double diff = std::abs(current - previous);
    est.value = current;
    est.error = diff;
    est.panels = panels;
    if (diff <= std::max({cfg.rel_tol * std::abs(current), cfg.abs_tol, abs_floor})) {
      est.converged = true;
      return est;
    }
    previous = current;
  }
}

inline double rounding_floor(double sup_bound, double length) {
  return 64.0 * std::numeric_limits<double>::epsilon() * sup_bound * length;
}

}  // namespace detail

/// (1/2T) int_{|t - center| <= T} |S(t)|^{2q} dt by composite Gauss-Legendre.
template <CoefficientSource S>
MomentResult windowed_average(const S& source, MomentOrder q, const Window& window,
                              const QuadratureConfig& cfg = {}) {
  check_power_range(source, q);
  const double B = bandlimit(source, q);
  const double width = 2.0 * window.half_width;
  if (B == 0.0) {
    detail::CompensatedComplexSum s;
    for (std::size_t n = 0; n < source.size(); ++n) s += source.coefficient(n);
    return {detail::modulus_power(s.value(), q.value()), MomentMethod::quadrature, 0.0, 0};
  }
  const auto f = [&](double t) { return detail::modulus_power(eval_sum(source, t), q.value()); };
  const double sup = std::pow(l1_norm(source), 2.0 * q.value());
  const auto est =
      detail::integrate_banded(f, window.lower(), window.upper(), B, cfg, detail::rounding_floor(sup, width));
  MomentResult result{est.value / width, MomentMethod::quadrature, est.error / width, est.panels};
  if (!est.converged) throw NotConvergedError("windowed average did not reach rel_tol", result);
  return result;
}

/// int K_T(t - H) |S(t)|^{2q} dt over the kernel support, with H a mandatory
/// panel boundary.
template <CoefficientSource S>
MomentResult fejer_weighted_integral(const S& source, MomentOrder q, const KernelParams& kernel,
                                     const QuadratureConfig& cfg = {}) {
  check_power_range(source, q);
  const double B = bandlimit(source, q);
  if (B == 0.0) {
    detail::CompensatedComplexSum s;
    for (std::size_t n = 0; n < source.size(); ++n) s += source.coefficient(n);
    return {detail::modulus_power(s.value(), q.value()) * kernel.T, MomentMethod::quadrature, 0.0, 0};
  }
  const auto f = [&](double t) {
    return kernel_value(kernel, t) * detail::modulus_power(eval_sum(source, t), q.value());
  };
  const double sup = std::pow(l1_norm(source), 2.0 * q.value());
  const double floor = detail::rounding_floor(sup, kernel.T);
  const auto left = detail::integrate_banded(f, kernel.shift - kernel.T, kernel.shift, B, cfg, floor);
  const auto right = detail::integrate_banded(f, kernel.shift, kernel.shift + kernel.T, B, cfg, floor);
  MomentResult result{left.value + right.value, MomentMethod::quadrature, left.error + right.error,
                      left.panels + right.panels};
  if (!left.converged || !right.converged) {
    throw NotConvergedError("kernel-weighted integral did not reach rel_tol", result);
  }
  return result;
}

namespace detail {

/// Interior points of [lo, hi] where |S| nearly vanishes. |S| has kinks only
/// at zeros of S, which are minima of the smooth |S|^2; the panel is at most
/// half a period of the top frequency of |S|^2, so sampling finds every
/// minimum, and Brent refinement in panel-relative coordinates places it to
/// about sqrt(eps) of the panel width.
/// Recursive bisection with the 15-point Gauss-Kronrod pair. A piece is
/// accepted once its error estimate is below rel_tol times its value or below
/// the evaluation noise times its length, so noisy integrands terminate.
template <class F>
void adaptive_gk15(const F& f, double a, double b, double rel_tol, double noise, unsigned depth,
                   CompensatedSum& value, CompensatedSum& error) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (depth == 0 || err <= std::max(rel_tol * std::abs(v), noise * (b - a))) {
    value += v;
    error += err;
    return;
  }
  const double mid = 0.5 * (a + b);
  adaptive_gk15(f, a, mid, rel_tol, noise, depth - 1, value, error);
  adaptive_gk15(f, mid, b, rel_tol, noise, depth - 1, value, error);
}

template <CoefficientSource S>
std::vector<double> near_zero_points(const S& source, double lo, double hi) {
  constexpr int kSamples = 32;
  const double step = (hi - lo) / kSamples;
  const auto g = [&](double s) { return std::norm(eval_sum(source, lo + s)); };
  std::array<double, kSamples + 1> v;
  double peak = 0.0;
  for (int j = 0; j <= kSamples; ++j) {
    v[j] = g(step * j);
    peak = std::max(peak, v[j]);
  }
  std::vector<double> cuts;
  for (int j = 1; j < kSamples; ++j) {
    if (!(v[j] <= v[j - 1] && v[j] <= v[j + 1])) continue;
    std::uintmax_t iterations = 200;
    const auto [s, gmin] = boost::math::tools::brent_find_minima(g, step * (j - 1), step * (j + 1),
                                                                 std::numeric_limits<double>::digits / 2, iterations);
    if (gmin <= 1e-4 * peak && s > 0.0 && s < hi - lo && (cuts.empty() || lo + s > cuts.back())) {
      cuts.push_back(lo + s);
    }
  }
  return cuts;
}

}  // namespace detail

/// (1/2T) int_{|t - center| <= T} |S(t)| dt. |S| has kinks at zeros of S, so
/// each half-oscillation panel is integrated by adaptive Gauss-Kronrod.
template <CoefficientSource S>
MomentResult abs_average(const S& source, const Window& window, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  const double B = bandlimit(source, MomentOrder(1));
  const double width = 2.0 * window.half_width;
  if (B == 0.0) {
    detail::CompensatedComplexSum s;
    for (std::size_t n = 0; n < source.size(); ++n) s += source.coefficient(n);
    return {std::abs(s.value()), MomentMethod::quadrature, 0.0, 0};
  }
  auto panels =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(width / panel_width(width, B) - 1e-12)));
  if (panels > cfg.max_panels) {
    throw NotConvergedError("abs_average needs more than max_panels base panels", {});
  }
  const auto f = [&](double t) { return std::abs(eval_sum(source, t)); };
  // Absolute error of one evaluation of |S|: rounding in the phases t phi_n
  // grows with |t| max |phi_n|.
  double max_phase = 0.0;
  for (std::size_t n = 0; n < source.size(); ++n) max_phase = std::max(max_phase, std::abs(source.frequency(n)));
  max_phase *= std::max(std::abs(window.lower()), std::abs(window.upper()));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * l1_norm(source) * (1.0 + max_phase);
  std::vector<double> values(panels), errors(panels);
  const double h = width / static_cast<double>(panels);
  const double a = window.lower();
  detail::parallel_for(panels, [&](std::size_t i) {
    const double lo = a + h * static_cast<double>(i);
    const double hi = (i + 1 == panels) ? window.upper() : a + h * static_cast<double>(i + 1);
    detail::CompensatedSum value, error;
    double left = lo;
    auto cuts = detail::near_zero_points(source, lo, hi);
    cuts.push_back(hi);
    for (double cut : cuts) {
      detail::adaptive_gk15(f, left, cut, cfg.rel_tol, noise, 20, value, error);
      left = cut;
    }
    values[i] = value.value();
    errors[i] = error.value();
  }, 16);
  detail::CompensatedSum total, total_err;
  for (std::size_t i = 0; i < panels; ++i) {
    total += values[i];
    total_err += errors[i];
  }
  return {total.value() / width, MomentMethod::quadrature, total_err.value() / width, panels};
}

}  // namespace expmoment
