#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace artqr {

enum class ErrorCode {
  InvalidArgument,
  InvalidVersion,
  CapacityExceeded,
  Unrecoverable,
  FormatError,
  GridOutOfBounds,
  NotFound,
  DeadZonePixels,
  DimensionMismatch,
  NonSymmetricInput,
  NonFiniteLoss,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map failure classes without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidVersion: return "InvalidVersion";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::Unrecoverable: return "Unrecoverable";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::GridOutOfBounds: return "GridOutOfBounds";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::DeadZonePixels: return "DeadZonePixels";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace artqr
