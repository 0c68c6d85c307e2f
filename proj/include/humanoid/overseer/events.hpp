#pragma once

#include <optional>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "humanoid/gait/executor.hpp"
#include "humanoid/gait/task.hpp"
#include "humanoid/overseer/router.hpp"

namespace humanoid::overseer {

namespace event {
struct Transcript {
  std::string text;
  std::string source;  // "script", "stdin", "console"
};
struct CommandDetected {
  gait::TaskCommand command;
};
struct ChatTurn {
  std::string user;
  std::string reply;
  std::optional<std::string> tag;
  double confidence = 0.0;
};
struct TaskStarted {
  std::string name;
};
struct TaskFinished {
  std::string name;
  gait::TaskOutcome outcome;
};
struct AssistantAnswered {
  std::string query;
  std::string kind;
  std::string answer;
  std::string provider;
};
struct SegmentFailed {
  std::string segment;
  std::string reason;
};
struct ErrorReport {
  std::string segment;
  std::string reason;
  double time = 0.0;
};
struct SegmentRestarted {
  std::string segment;
};
struct ModeChanged {
  Mode mode = Mode::Normal;
};
/// User-visible message that is not a fault (busy, nothing to stop, unavailable).
struct Notice {
  std::string text;
};
}  // namespace event

using RuntimeEvent =
    std::variant<event::Transcript, event::CommandDetected, event::ChatTurn, event::TaskStarted,
                 event::TaskFinished, event::AssistantAnswered, event::SegmentFailed, event::ErrorReport,
                 event::SegmentRestarted, event::ModeChanged, event::Notice>;

struct TimedEvent {
  double time = 0.0;  // session seconds
  RuntimeEvent event;
};

std::string_view kind_of(const RuntimeEvent& e);

/// {"kind": ..., "time": ..., ...fields}
nlohmann::json to_json(const TimedEvent& e);

/// One line for logs and the REPL.
std::string to_line(const TimedEvent& e);

}  // namespace humanoid::overseer
