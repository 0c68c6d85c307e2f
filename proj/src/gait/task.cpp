#include "humanoid/gait/task.hpp"

namespace humanoid::gait {

std::string describe(const TaskCommand& command) {
  struct {
    std::string operator()(const cmd::Walk&) const { return "walk"; }
    std::string operator()(const cmd::Run&) const { return "run"; }
    std::string operator()(const cmd::Stop&) const { return "stop"; }
    std::string operator()(const cmd::Turn& t) const {
      return t.direction == TurnDirection::Left ? "turn left" : "turn right";
    }
    std::string operator()(const cmd::PickUp& p) const { return "pick up " + p.object; }
    std::string operator()(const cmd::AssistantMode& a) const {
      return a.enter ? "home assistant" : "exit assistant";
    }
  } visitor;
  return std::visit(visitor, command);
}

bool is_motion(const TaskCommand& command) {
  return !std::holds_alternative<cmd::Stop>(command) &&
         !std::holds_alternative<cmd::AssistantMode>(command);
}

}  // namespace humanoid::gait
