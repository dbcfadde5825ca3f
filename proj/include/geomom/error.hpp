#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geomom {

enum class ErrorCode {
  DegenerateChart,
  ShellFold,
  GridTooCoarse,
  TruncationTooTight,
  PoleSingularity,
  PoleHit,
  AccuracyLoss,
  NonpositiveRadius,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every numerical failure in the library is reported through this type; the
// code is stable and is what the CLI emits in its error JSON.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geomom
