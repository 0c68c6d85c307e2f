#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "humanoid/gait/body.hpp"
#include "humanoid/gait/sequence.hpp"

namespace humanoid::gait {

struct GaitParams {
  double step_period = 1.2;     // s per full cycle
  double hip_amplitude = 20.0;  // degrees
  double knee_amplitude = 25.0;
  double ankle_amplitude = 10.0;
  /// Neutral angle per joint; joints not listed sit at kDefaultNeutral.
  JointTargets neutral;
  int frames_per_cycle = 20;  // even, so the half-period shift lands on a keyframe

  // Pick-up script.
  double crouch_depth = 30.0;  // knees bend by this much, hips by minus this
  double reach_angle = 45.0;   // shoulder raise while reaching; elbows extend by 2/3 of it
  double gripper_open = 40.0;
  double gripper_closed = 140.0;

  static constexpr double kDefaultNeutral = 90.0;
  double neutral_of(std::string_view joint) const;

  friend bool operator==(const GaitParams&, const GaitParams&) = default;
};

/// Throws InvalidGaitParams for non-positive period, negative amplitudes or an
/// odd/too-small frames_per_cycle.
void validate(const GaitParams& params);

nlohmann::json params_to_json(const GaitParams& params);
GaitParams params_from_json(const nlohmann::json& j);

enum class TurnDirection { Left, Right };

inline constexpr double kRunPeriodScale = 0.6;
inline constexpr double kRunAmplitudeScale = 1.25;
inline constexpr double kPickupDuration = 4.0;

/// Every joint at its neutral angle.
JointTargets neutral_stance(const GaitParams& params, const RobotBodyConfig& body);

/// Sinusoidal walk: legs in antiphase, knees a quarter period ahead of the
/// hips, shoulders counter-swinging at a quarter of the hip amplitude.
/// Throws LimitViolation when any keyframe leaves a servo's travel.
GaitSequence generate_walk_cycle(const GaitParams& params, const RobotBodyConfig& body);

/// Walk with step_period × 0.6 and leg amplitudes × 1.25.
GaitSequence generate_run_cycle(const GaitParams& params, const RobotBodyConfig& body);

/// Walk with the inner (turn-side) hip amplitude halved. The inner leg takes
/// phase 0, so turning right is turning left with left/right swapped.
GaitSequence generate_turn(const GaitParams& params, const RobotBodyConfig& body,
                           TurnDirection direction);

/// Six keyframes over four seconds: stand, crouch, reach, grip, rise, settle.
/// `object` is only used for the sequence name.
GaitSequence generate_pickup(std::string_view object, const RobotBodyConfig& body,
                             const GaitParams& params = {});

}  // namespace humanoid::gait
