#pragma once

#include <map>
#include <string>
#include <vector>

#include "humanoid/gait/body.hpp"

namespace humanoid::gait {

/// joint name → angle in degrees. Ordered so iteration is deterministic.
using JointTargets = std::map<std::string, double, std::less<>>;

struct Keyframe {
  double t = 0.0;  // seconds from sequence start
  JointTargets targets;

  friend bool operator==(const Keyframe&, const Keyframe&) = default;
};

struct GaitSequence {
  std::string name;
  std::vector<Keyframe> keyframes;  // strictly increasing t
  double period = 0.0;              // for cyclic sequences: time of the closing keyframe
  bool cyclic = false;

  double duration() const { return keyframes.empty() ? 0.0 : keyframes.back().t; }

  friend bool operator==(const GaitSequence&, const GaitSequence&) = default;
};

/// Tolerance for the first/last keyframe agreement of cyclic sequences.
inline constexpr double kCyclicClosureTolerance = 1e-9;

/// Throws LimitViolation for angles outside a servo's travel, JointSetMismatch
/// when keyframes disagree on joints, InvalidGaitParams for bad timing.
void validate(const GaitSequence& seq, const RobotBodyConfig& body);

/// Per-joint linear blend; exact at both endpoints. Requires a.t <= t <= b.t.
JointTargets interpolate(const Keyframe& a, const Keyframe& b, double t);

/// Targets at time t. Cyclic sequences wrap t into [0, period); others clamp
/// to [0, duration].
JointTargets sample(const GaitSequence& seq, double t);

}  // namespace humanoid::gait
