#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clicksim {

enum class ErrorCode {
  NotSquare,
  NonFinite,
  NotHermitian,
  NotPSD,
  ZeroTrace,
  DimensionMismatch,
  InvalidArgument,
  MaxStepsExceeded,
  NoClicks,
  WrongChannelCount,
  DivisionByZero,
  InsufficientClicks,
  IndexOutOfRange,
  ParseError,
  ValidationError,
  FactorMismatch,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::ZeroTrace: return "ZeroTrace";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::NoClicks: return "NoClicks";
    case ErrorCode::WrongChannelCount: return "WrongChannelCount";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::InsufficientClicks: return "InsufficientClicks";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::FactorMismatch: return "FactorMismatch";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clicksim
