#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace specseq {

enum class ErrorCode {
  InvalidInput,
  RefinementError,
  ShapeMismatch,
  IllDefinedHom,
  CompositionNonzero,
  NotInvertible,
  UnknownAtlas,
  StableRangeExceeded,
  NotStabilized,
  BidegreeViolation,
  NotConverged,
  NoncommutingDifferentials,
  HypothesisNotAcknowledged,
  DegreeOutOfRange,
};

/// Machine-readable name, e.g. "BIDEGREE_VIOLATION".
std::string_view to_string(ErrorCode code);

/// All precondition failures raised by the library. `details` carries
/// structured context such as offending bidegrees.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message),
        details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::vector<std::string> details_;
};

}  // namespace specseq
