#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "humanoid/gait/task.hpp"

namespace humanoid::overseer {

enum class Mode { Normal, Assistant };
std::string_view to_string(Mode mode);

namespace routes {
struct Task {
  gait::TaskCommand command;
  friend bool operator==(const Task&, const Task&) = default;
};
struct Chat {
  friend bool operator==(const Chat&, const Chat&) = default;
};
struct Assistant {
  friend bool operator==(const Assistant&, const Assistant&) = default;
};
struct Shutdown {
  friend bool operator==(const Shutdown&, const Shutdown&) = default;
};
}  // namespace routes

using Route = std::variant<routes::Task, routes::Chat, routes::Assistant, routes::Shutdown>;

inline constexpr std::string_view kDefaultPickupObject = "something";

/// Pure function of (text, mode). Command phrases are matched as contiguous
/// token runs anywhere in the normalized text; the longest phrase wins and
/// ties go to the earlier rule, with "stop" first.
///
///   stop | shutdown, shut down | turn left, turn right, turn | walk | run |
///   pick up <object> | home assistant | exit assistant
///
/// Unmatched text is Chat in normal mode and Assistant in assistant mode.
Route route(std::string_view text, Mode mode);

std::string describe(const Route& r);

}  // namespace humanoid::overseer
