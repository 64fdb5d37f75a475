#pragma once

#include <stdexcept>
#include <string>

namespace leaklab {

// Numeric values are mirrored by ll_status in include/leaklab/leaklab.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kWidthMismatch = 2,
  kOutOfRange = 3,
  kUnknownKey = 4,
  kBudgetExceeded = 5,
  kPrecondition = 6,
  kUnsupported = 7,
  kParse = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace leaklab
