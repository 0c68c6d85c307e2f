#pragma once

#include <string>
#include <variant>

#include "humanoid/gait/generators.hpp"

namespace humanoid::gait {

namespace cmd {
struct Walk {
  friend bool operator==(const Walk&, const Walk&) = default;
};
struct Run {
  friend bool operator==(const Run&, const Run&) = default;
};
struct Stop {
  friend bool operator==(const Stop&, const Stop&) = default;
};
struct Turn {
  TurnDirection direction = TurnDirection::Left;
  friend bool operator==(const Turn&, const Turn&) = default;
};
struct PickUp {
  std::string object;  // never empty
  friend bool operator==(const PickUp&, const PickUp&) = default;
};
/// "home assistant" enters assistant mode; "exit assistant" leaves it.
struct AssistantMode {
  bool enter = true;
  friend bool operator==(const AssistantMode&, const AssistantMode&) = default;
};
}  // namespace cmd

using TaskCommand =
    std::variant<cmd::Walk, cmd::Run, cmd::Stop, cmd::Turn, cmd::PickUp, cmd::AssistantMode>;

/// Spoken form, e.g. "turn left" or "pick up the bottle".
std::string describe(const TaskCommand& command);

/// True for commands that drive the servos (everything but Stop and AssistantMode).
bool is_motion(const TaskCommand& command);

}  // namespace humanoid::gait
