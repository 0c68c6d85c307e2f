#include "humanoid/overseer/events.hpp"

#include <cstdio>

namespace humanoid::overseer {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

nlohmann::json outcome_json(const gait::TaskOutcome& o) {
  nlohmann::json j{{"status", gait::to_string(o.status)},
                   {"frames_emitted", o.frames_emitted},
                   {"elapsed", o.elapsed}};
  if (o.status == gait::TaskOutcome::Status::Faulted) j["reason"] = o.reason;
  return j;
}

}  // namespace

std::string_view kind_of(const RuntimeEvent& e) {
  return std::visit(overloaded{
                        [](const event::Transcript&) { return "transcript"; },
                        [](const event::CommandDetected&) { return "command_detected"; },
                        [](const event::ChatTurn&) { return "chat_turn"; },
                        [](const event::TaskStarted&) { return "task_started"; },
                        [](const event::TaskFinished&) { return "task_finished"; },
                        [](const event::AssistantAnswered&) { return "assistant_answered"; },
                        [](const event::SegmentFailed&) { return "segment_failed"; },
                        [](const event::ErrorReport&) { return "error_report"; },
                        [](const event::SegmentRestarted&) { return "segment_restarted"; },
                        [](const event::ModeChanged&) { return "mode_changed"; },
                        [](const event::Notice&) { return "notice"; },
                    },
                    e);
}

nlohmann::json to_json(const TimedEvent& te) {
  nlohmann::json j{{"kind", kind_of(te.event)}, {"time", te.time}};
  std::visit(overloaded{
                 [&](const event::Transcript& e) {
                   j["text"] = e.text;
                   j["source"] = e.source;
                 },
                 [&](const event::CommandDetected& e) { j["command"] = gait::describe(e.command); },
                 [&](const event::ChatTurn& e) {
                   j["user"] = e.user;
                   j["reply"] = e.reply;
                   j["tag"] = e.tag ? nlohmann::json(*e.tag) : nlohmann::json(nullptr);
                   j["confidence"] = e.confidence;
                 },
                 [&](const event::TaskStarted& e) { j["name"] = e.name; },
                 [&](const event::TaskFinished& e) {
                   j["name"] = e.name;
                   j["outcome"] = outcome_json(e.outcome);
                 },
                 [&](const event::AssistantAnswered& e) {
                   j["query"] = e.query;
                   j["intent"] = e.kind;
                   j["answer"] = e.answer;
                   j["provider"] = e.provider;
                 },
                 [&](const event::SegmentFailed& e) {
                   j["segment"] = e.segment;
                   j["reason"] = e.reason;
                 },
                 [&](const event::ErrorReport& e) {
                   j["segment"] = e.segment;
                   j["reason"] = e.reason;
                   j["reported_at"] = e.time;
                 },
                 [&](const event::SegmentRestarted& e) { j["segment"] = e.segment; },
                 [&](const event::ModeChanged& e) { j["mode"] = to_string(e.mode); },
                 [&](const event::Notice& e) { j["text"] = e.text; },
             },
             te.event);
  return j;
}

std::string to_line(const TimedEvent& te) {
  char stamp[32];
  std::snprintf(stamp, sizeof stamp, "[%8.3f] ", te.time);
  std::string body = std::visit(
      overloaded{
          [](const event::Transcript& e) { return "heard (" + e.source + "): " + e.text; },
          [](const event::CommandDetected& e) { return "command: " + gait::describe(e.command); },
          [](const event::ChatTurn& e) { return "bot: " + e.reply; },
          [](const event::TaskStarted& e) { return "task started: " + e.name; },
          [](const event::TaskFinished& e) {
            auto s = "task finished: " + e.name + " " + std::string(gait::to_string(e.outcome.status)) + " after " +
                     std::to_string(e.outcome.frames_emitted) + " frames";
            if (!e.outcome.reason.empty()) s += " (" + e.outcome.reason + ")";
            return s;
          },
          [](const event::AssistantAnswered& e) { return "assistant: " + e.answer; },
          [](const event::SegmentFailed& e) { return "segment failed: " + e.segment + " (" + e.reason + ")"; },
          [](const event::ErrorReport& e) { return "error report: " + e.segment + ": " + e.reason; },
          [](const event::SegmentRestarted& e) { return "segment restarted: " + e.segment; },
          [](const event::ModeChanged& e) { return "mode: " + std::string(to_string(e.mode)); },
          [](const event::Notice& e) { return "notice: " + e.text; },
      },
      te.event);
  return stamp + body;
}

}  // namespace humanoid::overseer
