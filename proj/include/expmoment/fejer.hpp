#pragma once

#include <cmath>

#include "expmoment/error.hpp"

namespace expmoment {

/// Triangular kernel K_T(t - H) = (1 - |t - H| / T)^+.
struct KernelParams {
  double T = 1.0;
  double shift = 0.0;

  KernelParams(double T_, double shift_ = 0.0) : T(T_), shift(shift_) {
    if (!std::isfinite(T) || !std::isfinite(shift)) throw Error(ErrorKind::NonFinite, "kernel parameters");
    if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel width T must be positive");
  }
};

inline double kernel_value(const KernelParams& k, double t) {
  return std::fmax(0.0, 1.0 - std::abs(t - k.shift) / k.T);
}

/// Fourier transform int K_T(t) exp(-i u t) dt = T (sin(T u / 2) / (T u / 2))^2,
/// non-negative with value T at u = 0. The shift only contributes a phase, so
/// it is ignored here.
inline double kernel_hat(const KernelParams& k, double u) {
  const double x = 0.5 * k.T * u;
  if (std::abs(x) < 1e-6) {
    return k.T * (1.0 - x * x / 3.0);
  }
  const double s = std::sin(x) / x;
  return k.T * s * s;
}

/// K(t-H) + K(t-H+T) + K(t-H-T) - 1{|t-H| <= T}; never negative.
inline double covering_deficit(const KernelParams& k, double t) {
  // Work in x = (t - H) / T so the two triangles overlapping the plateau sum
  // to exactly 1 in floating point.
  const double x = (t - k.shift) / k.T;
  const auto tri = [](double y) { return std::fmax(0.0, 1.0 - std::abs(y)); };
  const double cover = tri(x) + tri(x + 1.0) + tri(x - 1.0);
  const double indicator = std::abs(x) <= 1.0 ? 1.0 : 0.0;
  return cover - indicator;
}

}  // namespace expmoment
