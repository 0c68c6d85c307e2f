#include "humanoid/gateway/protocol.hpp"

#include <charconv>

#include "humanoid/error.hpp"

namespace humanoid::gateway {

nlohmann::json to_json(const Envelope& e) { return {{"type", e.type}, {"seq", e.seq}, {"payload", e.payload}}; }

std::string encode(const Envelope& e) { return to_json(e).dump(); }

Envelope decode(std::string_view text, std::optional<std::int64_t>* seq_out) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::MalformedFrame, "frame is not JSON");
  if (!j.is_object()) throw Error(Errc::MalformedFrame, "frame is not a JSON object");
  auto seq = j.find("seq");
  if (seq == j.end() || !seq->is_number_integer()) throw Error(Errc::MalformedFrame, "missing integer \"seq\"");
  if (seq_out) *seq_out = seq->get<std::int64_t>();
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw Error(Errc::MalformedFrame, "missing string \"type\"");
  Envelope e{type->get<std::string>(), seq->get<std::int64_t>(), nlohmann::json::object()};
  if (auto p = j.find("payload"); p != j.end()) {
    if (!p->is_object()) throw Error(Errc::MalformedFrame, "\"payload\" must be an object");
    e.payload = *p;
  }
  return e;
}

nlohmann::json servo_state_payload(const hal::BusSnapshot& snapshot) {
  auto joints = nlohmann::json::array();
  for (const auto& s : snapshot.servos) {
    joints.push_back({{"name", s.joint},
                      {"channel", s.channel},
                      {"commanded_angle", s.commanded_angle},
                      {"actual_angle", s.actual_angle},
                      {"pulse", s.last_pulse}});
  }
  return {{"time", snapshot.time}, {"joints", std::move(joints)}};
}

namespace {

std::string_view status_name(overseer::SegmentStatus s) {
  switch (s) {
    case overseer::SegmentStatus::Running: return "running";
    case overseer::SegmentStatus::Restarting: return "restarting";
    case overseer::SegmentStatus::Failed: return "failed";
  }
  return "unknown";
}

}  // namespace

nlohmann::json supervisor_payload(const overseer::SessionStatus& status) {
  auto segments = nlohmann::json::array();
  for (const auto& s : status.segments) {
    nlohmann::json seg{{"name", s.name}, {"status", status_name(s.status)}, {"restart_count", s.restart_count}};
    seg["reason"] = s.status == overseer::SegmentStatus::Running ? nlohmann::json(nullptr)
                                                                 : nlohmann::json(s.last_reason);
    segments.push_back(std::move(seg));
  }
  return {{"segments", std::move(segments)},
          {"active_task", status.active_task ? nlohmann::json(*status.active_task) : nlohmann::json(nullptr)},
          {"mode", overseer::to_string(status.mode)},
          {"shut_down", status.shut_down}};
}

nlohmann::json metrics_payload(const overseer::SessionMetrics& metrics) { return {{"counts", metrics.to_json()}}; }

nlohmann::json display_payload(const hal::DotMatrixFrame& frame) {
  const auto bits = frame.bits();
  return {{"bitmap", std::vector<int>(bits.begin(), bits.end())}};
}

Envelope broadcast_for(const overseer::TimedEvent& te) {
  if (const auto* c = std::get_if<overseer::event::ChatTurn>(&te.event)) {
    return {std::string(msg::kChatTurn), 0,
            {{"time", te.time},
             {"user", c->user},
             {"reply", c->reply},
             {"tag", c->tag ? nlohmann::json(*c->tag) : nlohmann::json(nullptr)},
             {"confidence", c->confidence}}};
  }
  if (const auto* r = std::get_if<overseer::event::ErrorReport>(&te.event)) {
    return {std::string(msg::kErrorReport), 0, {{"time", r->time}, {"segment", r->segment}, {"reason", r->reason}}};
  }
  return {std::string(msg::kEvent), 0, overseer::to_json(te)};
}

Endpoint parse_endpoint(std::string_view address) {
  const auto colon = address.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(Errc::InvalidConfig, "gateway address must be host:port, got \"" + std::string(address) + "\"");
  }
  const auto port_text = address.substr(colon + 1);
  unsigned value = 0;
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() || value > 65535) {
    throw Error(Errc::InvalidConfig, "bad gateway port \"" + std::string(port_text) + "\"");
  }
  return {std::string(address.substr(0, colon)), static_cast<std::uint16_t>(value)};
}

}  // namespace humanoid::gateway
