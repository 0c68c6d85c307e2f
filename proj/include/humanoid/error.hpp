#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace humanoid {

enum class Errc {
  // intent engine
  InvalidCorpus,
  EmptyCorpus,
  DimensionMismatch,
  StaleCache,
  TagSetMismatch,
  FormatVersionMismatch,
  CorruptFile,
  // gait engine
  AngleOutOfRange,
  PulseExceedsPeriod,
  JointSetMismatch,
  LimitViolation,
  InvalidGaitParams,
  InvalidBody,
  // servo hal
  UnknownChannel,
  PulseOutOfRange,
  IoFailure,
  // overseer / gateway
  InvalidConfig,
  BindFailure,
  MalformedFrame,
  PreconditionViolation,
};

std::string_view to_string(Errc code) noexcept;

/// Exception type thrown by every module. The code identifies the contract
/// violation; the message carries context for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace humanoid
