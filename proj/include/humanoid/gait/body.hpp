#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace humanoid::gait {

enum class ServoModel { MG995, SG90 };

std::string_view to_string(ServoModel model);
ServoModel servo_model_from_string(std::string_view name);

/// Nominal no-load slew in degrees per second.
double default_slew(ServoModel model);

struct ServoSpec {
  std::string id;  // joint name
  int channel = 0;
  ServoModel model = ServoModel::MG995;
  double min_pulse = 500.0;   // µs at 0°
  double max_pulse = 2500.0;  // µs at angle_range
  double angle_range = 180.0;
  double max_slew = 375.0;    // °/s

  friend bool operator==(const ServoSpec&, const ServoSpec&) = default;
};

ServoSpec make_servo(std::string id, int channel, ServoModel model);

/// Fixed joint names shared by the gait generators, the console and traces.
namespace joint {
inline constexpr std::string_view kLeftHip = "left_hip";
inline constexpr std::string_view kRightHip = "right_hip";
inline constexpr std::string_view kLeftKnee = "left_knee";
inline constexpr std::string_view kRightKnee = "right_knee";
inline constexpr std::string_view kLeftAnkle = "left_ankle";
inline constexpr std::string_view kRightAnkle = "right_ankle";
inline constexpr std::string_view kLeftShoulder = "left_shoulder";
inline constexpr std::string_view kRightShoulder = "right_shoulder";
inline constexpr std::string_view kLeftElbow = "left_elbow";
inline constexpr std::string_view kRightElbow = "right_elbow";
inline constexpr std::string_view kNeckPan = "neck_pan";
inline constexpr std::string_view kGripper = "gripper";
}  // namespace joint

struct RobotBodyConfig {
  std::vector<ServoSpec> servos;
  double pwm_frequency = 50.0;

  /// Throws InvalidBody for unknown joints.
  const ServoSpec& servo(std::string_view id) const;
  const ServoSpec* find_channel(int channel) const;
  std::vector<std::string> joint_names() const;
  std::vector<int> channels() const;

  friend bool operator==(const RobotBodyConfig&, const RobotBodyConfig&) = default;
};

/// 8 × MG995 on channels 0-7 (hips, knees, ankles, shoulders) and
/// 4 × SG90 on channels 8-11 (elbows, neck pan, gripper), 50 Hz PWM.
RobotBodyConfig default_body();

/// Throws InvalidBody unless the body has 8 MG995 + 4 SG90 servos with unique
/// channels and ids and sane pulse/angle/slew limits.
void validate(const RobotBodyConfig& body);

nlohmann::json body_to_json(const RobotBodyConfig& body);
RobotBodyConfig body_from_json(const nlohmann::json& j);

}  // namespace humanoid::gait
