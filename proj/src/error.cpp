#include "humanoid/error.hpp"

namespace humanoid {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidCorpus: return "InvalidCorpus";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::StaleCache: return "StaleCache";
    case Errc::TagSetMismatch: return "TagSetMismatch";
    case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::AngleOutOfRange: return "AngleOutOfRange";
    case Errc::PulseExceedsPeriod: return "PulseExceedsPeriod";
    case Errc::JointSetMismatch: return "JointSetMismatch";
    case Errc::LimitViolation: return "LimitViolation";
    case Errc::InvalidGaitParams: return "InvalidGaitParams";
    case Errc::InvalidBody: return "InvalidBody";
    case Errc::UnknownChannel: return "UnknownChannel";
    case Errc::PulseOutOfRange: return "PulseOutOfRange";
    case Errc::IoFailure: return "IoFailure";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::BindFailure: return "BindFailure";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::PreconditionViolation: return "PreconditionViolation";
  }
  return "Unknown";
}

}  // namespace humanoid
