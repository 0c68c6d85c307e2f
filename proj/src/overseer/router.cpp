#include "humanoid/overseer/router.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "humanoid/intent/text.hpp"

namespace humanoid::overseer {
namespace {

using Tokens = std::vector<std::string>;

enum class Action { Stop, Shutdown, TurnLeft, TurnRight, Turn, Walk, Run, PickUp, EnterAssistant, ExitAssistant };

struct Rule {
  std::array<std::string_view, 2> words;
  std::size_t length;
  Action action;
};

// Order is the tie-break.
constexpr std::array kRules{
    Rule{{"stop", ""}, 1, Action::Stop},
    Rule{{"shutdown", ""}, 1, Action::Shutdown},
    Rule{{"shut", "down"}, 2, Action::Shutdown},
    Rule{{"turn", "left"}, 2, Action::TurnLeft},
    Rule{{"turn", "right"}, 2, Action::TurnRight},
    Rule{{"turn", ""}, 1, Action::Turn},
    Rule{{"walk", ""}, 1, Action::Walk},
    Rule{{"run", ""}, 1, Action::Run},
    Rule{{"pick", "up"}, 2, Action::PickUp},
    Rule{{"home", "assistant"}, 2, Action::EnterAssistant},
    Rule{{"exit", "assistant"}, 2, Action::ExitAssistant},
};

struct Match {
  const Rule* rule;
  std::size_t end;  // one past the last matched token
};

std::optional<Match> best_match(const Tokens& tokens) {
  std::optional<Match> best;
  for (const auto& rule : kRules) {
    if (best && rule.length <= best->rule->length) continue;
    for (std::size_t i = 0; i + rule.length <= tokens.size(); ++i) {
      bool hit = true;
      for (std::size_t k = 0; k < rule.length; ++k) hit = hit && tokens[i + k] == rule.words[k];
      if (hit) {
        best = Match{&rule, i + rule.length};
        break;
      }
    }
  }
  return best;
}

std::string rest_of(const Tokens& tokens, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Normal ? "normal" : "assistant"; }

Route route(std::string_view text, Mode mode) {
  const auto tokens = intent::normalize_text(text);
  const auto match = best_match(tokens);
  if (!match) {
    if (mode == Mode::Assistant) return routes::Assistant{};
    return routes::Chat{};
  }
  using gait::TurnDirection;
  namespace cmd = gait::cmd;
  switch (match->rule->action) {
    case Action::Stop: return routes::Task{cmd::Stop{}};
    case Action::Shutdown: return routes::Shutdown{};
    case Action::TurnLeft:
    case Action::Turn: return routes::Task{cmd::Turn{TurnDirection::Left}};
    case Action::TurnRight: return routes::Task{cmd::Turn{TurnDirection::Right}};
    case Action::Walk: return routes::Task{cmd::Walk{}};
    case Action::Run: return routes::Task{cmd::Run{}};
    case Action::PickUp: {
      auto object = rest_of(tokens, match->end);
      if (object.empty()) object = kDefaultPickupObject;
      return routes::Task{cmd::PickUp{std::move(object)}};
    }
    case Action::EnterAssistant: return routes::Task{cmd::AssistantMode{true}};
    case Action::ExitAssistant: return routes::Task{cmd::AssistantMode{false}};
  }
  return routes::Chat{};
}

std::string describe(const Route& r) {
  if (const auto* t = std::get_if<routes::Task>(&r)) return "task:" + gait::describe(t->command);
  if (std::holds_alternative<routes::Chat>(r)) return "chat";
  if (std::holds_alternative<routes::Assistant>(r)) return "assistant";
  return "shutdown";
}

}  // namespace humanoid::overseer
