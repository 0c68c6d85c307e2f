#include "humanoid/gait/body.hpp"

#include <algorithm>
#include <set>

#include "humanoid/error.hpp"

namespace humanoid::gait {

std::string_view to_string(ServoModel model) {
  return model == ServoModel::MG995 ? "MG995" : "SG90";
}

ServoModel servo_model_from_string(std::string_view name) {
  if (name == "MG995") return ServoModel::MG995;
  if (name == "SG90") return ServoModel::SG90;
  throw Error(Errc::InvalidBody, "unknown servo model '" + std::string(name) + "'");
}

double default_slew(ServoModel model) {
  // MG995: 0.16 s / 60°; SG90: 0.11 s / 60°.
  return model == ServoModel::MG995 ? 375.0 : 545.0;
}

ServoSpec make_servo(std::string id, int channel, ServoModel model) {
  ServoSpec spec;
  spec.id = std::move(id);
  spec.channel = channel;
  spec.model = model;
  spec.max_slew = default_slew(model);
  return spec;
}

const ServoSpec& RobotBodyConfig::servo(std::string_view id) const {
  for (const auto& s : servos) {
    if (s.id == id) return s;
  }
  throw Error(Errc::InvalidBody, "no joint named '" + std::string(id) + "'");
}

const ServoSpec* RobotBodyConfig::find_channel(int channel) const {
  for (const auto& s : servos) {
    if (s.channel == channel) return &s;
  }
  return nullptr;
}

std::vector<std::string> RobotBodyConfig::joint_names() const {
  std::vector<std::string> names;
  for (const auto& s : servos) names.push_back(s.id);
  return names;
}

std::vector<int> RobotBodyConfig::channels() const {
  std::vector<int> out;
  for (const auto& s : servos) out.push_back(s.channel);
  return out;
}

RobotBodyConfig default_body() {
  using M = ServoModel;
  RobotBodyConfig body;
  int channel = 0;
  for (auto id : {joint::kLeftHip, joint::kRightHip, joint::kLeftKnee, joint::kRightKnee,
                  joint::kLeftAnkle, joint::kRightAnkle, joint::kLeftShoulder,
                  joint::kRightShoulder}) {
    body.servos.push_back(make_servo(std::string(id), channel++, M::MG995));
  }
  for (auto id : {joint::kLeftElbow, joint::kRightElbow, joint::kNeckPan, joint::kGripper}) {
    body.servos.push_back(make_servo(std::string(id), channel++, M::SG90));
  }
  return body;
}

void validate(const RobotBodyConfig& body) {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidBody, what); };
  if (body.servos.size() != 12) fail("expected 12 servos, got " + std::to_string(body.servos.size()));
  const auto mg995 = std::count_if(body.servos.begin(), body.servos.end(),
                                   [](const ServoSpec& s) { return s.model == ServoModel::MG995; });
  if (mg995 != 8) fail("expected 8 MG995 and 4 SG90 servos");
  std::set<int> channels;
  std::set<std::string> ids;
  for (const auto& s : body.servos) {
    if (!channels.insert(s.channel).second) fail("duplicate channel " + std::to_string(s.channel));
    if (!ids.insert(s.id).second) fail("duplicate joint '" + s.id + "'");
    if (!(s.min_pulse < s.max_pulse)) fail(s.id + ": min_pulse must be below max_pulse");
    if (!(s.angle_range > 0.0)) fail(s.id + ": angle_range must be positive");
    if (!(s.max_slew > 0.0)) fail(s.id + ": max_slew must be positive");
  }
  if (!(body.pwm_frequency > 0.0)) fail("pwm_frequency must be positive");
  for (const auto& s : body.servos) {
    if (s.max_pulse > 1e6 / body.pwm_frequency) fail(s.id + ": max_pulse exceeds the PWM period");
  }
}

nlohmann::json body_to_json(const RobotBodyConfig& body) {
  nlohmann::json servos = nlohmann::json::array();
  for (const auto& s : body.servos) {
    servos.push_back({{"id", s.id},
                      {"channel", s.channel},
                      {"model", to_string(s.model)},
                      {"min_pulse", s.min_pulse},
                      {"max_pulse", s.max_pulse},
                      {"angle_range", s.angle_range},
                      {"max_slew", s.max_slew}});
  }
  return {{"pwm_frequency", body.pwm_frequency}, {"servos", std::move(servos)}};
}

RobotBodyConfig body_from_json(const nlohmann::json& j) {
  RobotBodyConfig body;
  try {
    body.pwm_frequency = j.value("pwm_frequency", 50.0);
    for (const auto& sj : j.at("servos")) {
      auto spec = make_servo(sj.at("id").get<std::string>(), sj.at("channel").get<int>(),
                             servo_model_from_string(sj.at("model").get<std::string>()));
      spec.min_pulse = sj.value("min_pulse", spec.min_pulse);
      spec.max_pulse = sj.value("max_pulse", spec.max_pulse);
      spec.angle_range = sj.value("angle_range", spec.angle_range);
      spec.max_slew = sj.value("max_slew", spec.max_slew);
      body.servos.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidBody, e.what());
  }
  validate(body);
  return body;
}

}  // namespace humanoid::gait
