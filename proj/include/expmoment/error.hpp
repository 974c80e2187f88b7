#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace expmoment {

enum class ErrorKind {
  NegativeAmplitude,
  LengthMismatch,
  NonFinite,
  Empty,
  DominationViolated,
  InvalidArgument,
  Overflow,
  NotConverged,
  TermBudgetExceeded,
  BudgetExceeded,
  TooManySigns,
  ImaginaryResidue,
  NotInteger,
  BadGap,
  DegenerateCosine,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NegativeAmplitude: return "NegativeAmplitude";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::DominationViolated: return "DominationViolated";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::TermBudgetExceeded: return "TermBudgetExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::TooManySigns: return "TooManySigns";
    case ErrorKind::ImaginaryResidue: return "ImaginaryResidue";
    case ErrorKind::NotInteger: return "NotInteger";
    case ErrorKind::BadGap: return "BadGap";
    case ErrorKind::DegenerateCosine: return "DegenerateCosine";
  }
  return "Unknown";
}

/// Base exception of the library; `kind()` identifies the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace expmoment
