#include "kramers/error.hpp"

namespace kramers {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidAccommodation: return "InvalidAccommodation";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kTailTooLarge: return "TailTooLarge";
    case ErrorCode::kRegularityCheckFailed: return "RegularityCheckFailed";
    case ErrorCode::kOscillatoryNonConvergence: return "OscillatoryNonConvergence";
    case ErrorCode::kMaxItersExceeded: return "MaxItersExceeded";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kFitUnstable: return "FitUnstable";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace kramers
