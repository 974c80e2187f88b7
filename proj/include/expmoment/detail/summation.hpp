#pragma once

#include <cmath>
#include <complex>

namespace expmoment::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) noexcept {
    *this += other.sum_;
    *this += other.comp_;
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  CompensatedComplexSum& operator+=(std::complex<double> z) noexcept {
    re_ += z.real();
    im_ += z.imag();
    return *this;
  }

  CompensatedComplexSum& operator+=(const CompensatedComplexSum& other) noexcept {
    re_ += other.re_;
    im_ += other.im_;
    return *this;
  }

  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace expmoment::detail
