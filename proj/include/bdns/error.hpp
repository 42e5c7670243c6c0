#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bdns {

enum class ErrorCode {
  NonPowerOfTwo,
  BadDimension,
  GridMismatch,
  NonZeroMean,
  BlockOutOfRange,
  TooFewSamples,
  Degenerate,
  NonPositiveDensity,
  GammaNotAdmissible,
  AlphaBelowLame,
  ModelInvalid,
  VacuumApproach,
  IncompatibleCurl,
  NegativeTime,
  CflViolation,
  UnknownScenario,
  MissingKey,
  BadValue,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bdns
