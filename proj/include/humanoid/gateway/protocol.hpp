#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "humanoid/hal/display.hpp"
#include "humanoid/hal/servo_bus.hpp"
#include "humanoid/overseer/events.hpp"
#include "humanoid/overseer/session.hpp"

namespace humanoid::gateway {

inline constexpr int kProtocolVersion = 1;

namespace msg {
// server -> client
inline constexpr std::string_view kHello = "hello";
inline constexpr std::string_view kServoState = "servo_state";
inline constexpr std::string_view kChatTurn = "chat_turn";
inline constexpr std::string_view kSupervisor = "supervisor";
inline constexpr std::string_view kErrorReport = "error_report";
inline constexpr std::string_view kMetrics = "metrics";
inline constexpr std::string_view kDisplay = "display";
inline constexpr std::string_view kEvent = "event";
inline constexpr std::string_view kAck = "ack";
inline constexpr std::string_view kError = "error";
// client -> server
inline constexpr std::string_view kCommand = "command";
inline constexpr std::string_view kChat = "chat";
inline constexpr std::string_view kAckRequest = "ack_request";
}  // namespace msg

struct Envelope {
  std::string type;
  std::int64_t seq = 0;
  nlohmann::json payload = nlohmann::json::object();
};

nlohmann::json to_json(const Envelope& e);
std::string encode(const Envelope& e);

/// Parses an inbound text frame. Throws MalformedFrame when it is not a JSON
/// object with a string "type", an integer "seq" and an object "payload".
/// The seq is still reported through `seq_out` when it could be read.
Envelope decode(std::string_view text, std::optional<std::int64_t>* seq_out = nullptr);

nlohmann::json servo_state_payload(const hal::BusSnapshot& snapshot);
nlohmann::json supervisor_payload(const overseer::SessionStatus& status);
nlohmann::json metrics_payload(const overseer::SessionMetrics& metrics);
nlohmann::json display_payload(const hal::DotMatrixFrame& frame);

/// Maps a runtime event to the broadcast it produces: chat_turn and
/// error_report for those events, "event" (the event's JSON) for the rest.
Envelope broadcast_for(const overseer::TimedEvent& e);

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port"; throws InvalidConfig.
Endpoint parse_endpoint(std::string_view address);

}  // namespace humanoid::gateway
