#pragma once

#include <stdexcept>
#include <string>

namespace kramers {

// Numeric values are part of the C ABI (kramers_status in kramers.h).
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kInvalidAccommodation = 2,
  kNonConvergence = 3,
  kTailTooLarge = 4,
  kRegularityCheckFailed = 5,
  kOscillatoryNonConvergence = 6,
  kMaxItersExceeded = 7,
  kDivergenceDetected = 8,
  kFitUnstable = 9,
  kIo = 10,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kramers
