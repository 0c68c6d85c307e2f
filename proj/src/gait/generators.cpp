#include "humanoid/gait/generators.hpp"

#include <cmath>
#include <numbers>

#include "humanoid/error.hpp"

namespace humanoid::gait {
namespace {

struct LegSide {
  std::string_view hip, knee, ankle, shoulder;
};
constexpr LegSide kLeft{joint::kLeftHip, joint::kLeftKnee, joint::kLeftAnkle, joint::kLeftShoulder};
constexpr LegSide kRight{joint::kRightHip, joint::kRightKnee, joint::kRightAnkle, joint::kRightShoulder};

struct CycleShape {
  std::string name;
  double period;
  double left_hip, right_hip;  // per-side hip amplitude
  double knee, ankle;
  bool right_leads;  // right leg takes phase 0
};

void check_limits(const JointTargets& targets, const RobotBodyConfig& body, const std::string& name,
                  double t) {
  for (const auto& [joint, angle] : targets) {
    const auto& spec = body.servo(joint);
    if (!(angle >= 0.0 && angle <= spec.angle_range)) {
      throw Error(Errc::LimitViolation, name + ": " + joint + " would reach " + std::to_string(angle) +
                                            "° at t=" + std::to_string(t) + " (travel 0-" +
                                            std::to_string(spec.angle_range) + ")");
    }
  }
}

GaitSequence build_cycle(const GaitParams& params, const RobotBodyConfig& body, const CycleShape& shape) {
  validate(params);
  const int frames = params.frames_per_cycle;
  const int half = frames / 2;
  const auto base = neutral_stance(params, body);

  // Phase index k (0..frames-1) of a side shifted by `offset` frames; the
  // modular index keeps the antiphase relation bit-exact.
  auto wave = [frames](int k, int offset, double extra) {
    const int idx = (k + offset) % frames;
    return std::sin(2.0 * std::numbers::pi * idx / frames + extra);
  };

  GaitSequence seq{shape.name, {}, shape.period, true};
  for (int k = 0; k < frames; ++k) {
    Keyframe kf{shape.period * k / frames, base};
    for (const auto* side : {&kLeft, &kRight}) {
      const bool is_right = side == &kRight;
      const int offset = (is_right != shape.right_leads) ? half : 0;
      const double hip_amp = is_right ? shape.right_hip : shape.left_hip;
      const double s = wave(k, offset, 0.0);
      kf.targets[std::string(side->hip)] = params.neutral_of(side->hip) + hip_amp * s;
      kf.targets[std::string(side->knee)] =
          params.neutral_of(side->knee) + shape.knee * wave(k, offset, std::numbers::pi / 2);
      kf.targets[std::string(side->ankle)] = params.neutral_of(side->ankle) - shape.ankle * s;
      kf.targets[std::string(side->shoulder)] = params.neutral_of(side->shoulder) - hip_amp / 4.0 * s;
    }
    check_limits(kf.targets, body, shape.name, kf.t);
    seq.keyframes.push_back(std::move(kf));
  }
  // Closing keyframe repeats the first so the cycle wraps seamlessly.
  seq.keyframes.push_back({shape.period, seq.keyframes.front().targets});
  return seq;
}

}  // namespace

double GaitParams::neutral_of(std::string_view joint) const {
  auto it = neutral.find(joint);
  return it == neutral.end() ? kDefaultNeutral : it->second;
}

void validate(const GaitParams& p) {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidGaitParams, what); };
  if (!(p.step_period > 0.0)) fail("step_period must be positive");
  if (p.hip_amplitude < 0.0 || p.knee_amplitude < 0.0 || p.ankle_amplitude < 0.0) {
    fail("amplitudes must be >= 0");
  }
  if (p.frames_per_cycle < 4 || p.frames_per_cycle % 2 != 0) fail("frames_per_cycle must be even and >= 4");
  if (p.crouch_depth < 0.0 || p.reach_angle < 0.0) fail("pick-up angles must be >= 0");
}

nlohmann::json params_to_json(const GaitParams& p) {
  return {{"step_period", p.step_period},       {"hip_amplitude", p.hip_amplitude},
          {"knee_amplitude", p.knee_amplitude}, {"ankle_amplitude", p.ankle_amplitude},
          {"neutral", p.neutral},               {"frames_per_cycle", p.frames_per_cycle},
          {"crouch_depth", p.crouch_depth},     {"reach_angle", p.reach_angle},
          {"gripper_open", p.gripper_open},     {"gripper_closed", p.gripper_closed}};
}

GaitParams params_from_json(const nlohmann::json& j) {
  GaitParams p;
  try {
    p.step_period = j.value("step_period", p.step_period);
    p.hip_amplitude = j.value("hip_amplitude", p.hip_amplitude);
    p.knee_amplitude = j.value("knee_amplitude", p.knee_amplitude);
    p.ankle_amplitude = j.value("ankle_amplitude", p.ankle_amplitude);
    if (auto it = j.find("neutral"); it != j.end()) {
      for (const auto& [joint, angle] : it->items()) p.neutral[joint] = angle.get<double>();
    }
    p.frames_per_cycle = j.value("frames_per_cycle", p.frames_per_cycle);
    p.crouch_depth = j.value("crouch_depth", p.crouch_depth);
    p.reach_angle = j.value("reach_angle", p.reach_angle);
    p.gripper_open = j.value("gripper_open", p.gripper_open);
    p.gripper_closed = j.value("gripper_closed", p.gripper_closed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidGaitParams, e.what());
  }
  validate(p);
  return p;
}

JointTargets neutral_stance(const GaitParams& params, const RobotBodyConfig& body) {
  JointTargets out;
  for (const auto& spec : body.servos) out[spec.id] = params.neutral_of(spec.id);
  check_limits(out, body, "neutral stance", 0.0);
  return out;
}

GaitSequence generate_walk_cycle(const GaitParams& p, const RobotBodyConfig& body) {
  return build_cycle(p, body, {"walk", p.step_period, p.hip_amplitude, p.hip_amplitude,
                               p.knee_amplitude, p.ankle_amplitude, false});
}

GaitSequence generate_run_cycle(const GaitParams& p, const RobotBodyConfig& body) {
  const double hip = p.hip_amplitude * kRunAmplitudeScale;
  return build_cycle(p, body, {"run", p.step_period * kRunPeriodScale, hip, hip,
                               p.knee_amplitude * kRunAmplitudeScale,
                               p.ankle_amplitude * kRunAmplitudeScale, false});
}

GaitSequence generate_turn(const GaitParams& p, const RobotBodyConfig& body, TurnDirection direction) {
  const bool left = direction == TurnDirection::Left;
  const double inner = p.hip_amplitude / 2.0;
  return build_cycle(p, body, {left ? "turn-left" : "turn-right", p.step_period,
                               left ? inner : p.hip_amplitude, left ? p.hip_amplitude : inner,
                               p.knee_amplitude, p.ankle_amplitude, !left});
}

GaitSequence generate_pickup(std::string_view object, const RobotBodyConfig& body, const GaitParams& p) {
  if (object.empty()) throw Error(Errc::PreconditionViolation, "pick-up needs an object");
  validate(p);
  const std::string name = "pickup:" + std::string(object);
  const auto stand = neutral_stance(p, body);
  auto n = [&](std::string_view joint) { return p.neutral_of(joint); };

  auto open = stand;
  open[std::string(joint::kGripper)] = p.gripper_open;

  auto crouch = open;
  for (const auto* side : {&kLeft, &kRight}) {
    crouch[std::string(side->hip)] = n(side->hip) - p.crouch_depth;
    crouch[std::string(side->knee)] = n(side->knee) + p.crouch_depth;
    crouch[std::string(side->ankle)] = n(side->ankle) + p.crouch_depth / 2.0;
  }

  auto reach = crouch;
  const double elbow_extend = p.reach_angle * 2.0 / 3.0;
  reach[std::string(joint::kLeftShoulder)] = n(joint::kLeftShoulder) + p.reach_angle;
  reach[std::string(joint::kRightShoulder)] = n(joint::kRightShoulder) + p.reach_angle;
  reach[std::string(joint::kLeftElbow)] = n(joint::kLeftElbow) - elbow_extend;
  reach[std::string(joint::kRightElbow)] = n(joint::kRightElbow) - elbow_extend;

  auto grip = reach;
  grip[std::string(joint::kGripper)] = p.gripper_closed;

  auto rise = grip;
  auto settle = stand;
  for (const auto* side : {&kLeft, &kRight}) {
    for (auto j : {side->hip, side->knee, side->ankle}) rise[std::string(j)] = n(j);
  }
  settle[std::string(joint::kGripper)] = p.gripper_closed;

  GaitSequence seq{name, {}, kPickupDuration, false};
  const JointTargets* poses[] = {&open, &crouch, &reach, &grip, &rise, &settle};
  for (std::size_t i = 0; i < 6; ++i) {
    const double t = kPickupDuration * static_cast<double>(i) / 5.0;
    check_limits(*poses[i], body, name, t);
    seq.keyframes.push_back({t, *poses[i]});
  }
  return seq;
}

}  // namespace humanoid::gait
