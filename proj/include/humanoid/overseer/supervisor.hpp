#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "humanoid/overseer/events.hpp"

namespace humanoid::overseer {

namespace segment {
inline constexpr std::string_view kSpeech = "speech";
inline constexpr std::string_view kChatbot = "chatbot";
inline constexpr std::string_view kTaskParser = "task_parser";
inline constexpr std::string_view kAssistant = "assistant";
inline constexpr std::string_view kGateway = "gateway";
inline constexpr std::string_view kAll[] = {kSpeech, kChatbot, kTaskParser, kAssistant, kGateway};
}  // namespace segment

enum class SegmentStatus { Running, Restarting, Failed };
std::string_view to_string(SegmentStatus status);

struct RestartPolicy {
  std::vector<double> backoff{0.5, 1.0, 2.0};  // delay before restart n (last value repeats)
  int max_restarts = 3;                        // within `window`; one more failure parks the segment
  double window = 60.0;                        // seconds
};

struct SegmentState {
  std::string name;
  SegmentStatus status = SegmentStatus::Running;
  int restart_count = 0;
  std::string last_reason;
  double restart_at = 0.0;      // valid while Restarting
  std::deque<double> failures;  // times within the current window
};

/// Tracks segment health. Time is passed in explicitly so the same policy
/// runs on simulated and wall-clock time. Not thread-safe; the session
/// serializes access.
class Supervisor {
 public:
  explicit Supervisor(RestartPolicy policy = {});

  /// Registers a segment as Running. `on_restart` runs when it comes back.
  void add(std::string name, std::function<void()> on_restart = {});

  /// Records a failure detected at `now`: SegmentFailed then ErrorReport,
  /// both stamped `now`. No events if the segment is already down.
  std::vector<RuntimeEvent> fail(std::string_view name, std::string reason, double now);

  /// Restarts segments whose backoff has elapsed.
  std::vector<RuntimeEvent> poll(double now);

  bool available(std::string_view name) const;
  const SegmentState& state(std::string_view name) const;
  std::vector<SegmentState> states() const;
  /// Earliest pending restart, if any.
  std::optional<double> next_restart() const;
  const RestartPolicy& policy() const noexcept { return policy_; }

 private:
  struct Entry {
    SegmentState state;
    std::function<void()> on_restart;
  };
  Entry& entry(std::string_view name);
  const Entry& entry(std::string_view name) const;

  RestartPolicy policy_;
  std::vector<Entry> entries_;
};

}  // namespace humanoid::overseer
