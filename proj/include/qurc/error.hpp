#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qurc {

enum class ErrorCode {
  InvalidSubsystem,
  NotHermitian,
  NotPSD,
  TraceMismatch,
  NoConvergence,
  AngleOutOfRange,
  DimensionMismatch,
  NotAProbabilityVector,
  UnderdeterminedSettings,
  InvalidConfig,
  IoError,
  MalformedCsv,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSubsystem: return "InvalidSubsystem";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotAProbabilityVector: return "NotAProbabilityVector";
    case ErrorCode::UnderdeterminedSettings: return "UnderdeterminedSettings";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qurc
