#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace artherapist {

// Closed set of failure categories. The service maps these onto HTTP statuses
// and the CLI onto exit codes, so new values need a mapping in both places.
enum class ErrorCode {
  invalid_argument,
  validation_failed,
  not_found,
  duplicate,
  version_conflict,
  sequence_conflict,
  sealed,
  not_sealed,
  corrupt_log,
  engine_state,
  divergence,
  io_failure,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::version_conflict: return "version_conflict";
    case ErrorCode::sequence_conflict: return "sequence_conflict";
    case ErrorCode::sealed: return "sealed";
    case ErrorCode::not_sealed: return "not_sealed";
    case ErrorCode::corrupt_log: return "corrupt_log";
    case ErrorCode::engine_state: return "engine_state";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::io_failure: return "io_failure";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace artherapist
