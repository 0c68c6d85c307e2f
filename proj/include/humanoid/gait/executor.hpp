#pragma once

#include <functional>
#include <optional>
#include <stop_token>
#include <string>

#include "humanoid/gait/sequence.hpp"
#include "humanoid/hal/servo_bus.hpp"

namespace humanoid::gait {

struct TaskOutcome {
  enum class Status { Completed, Interrupted, Faulted };
  Status status = Status::Completed;
  std::string reason;  // set when Faulted
  std::size_t frames_emitted = 0;
  double elapsed = 0.0;  // simulated seconds

  friend bool operator==(const TaskOutcome&, const TaskOutcome&) = default;
};

std::string_view to_string(TaskOutcome::Status status);

/// How many times to play a sequence. Non-cyclic sequences always play once.
struct Repeat {
  std::optional<int> count;  // empty: until interrupted

  static Repeat times(int n) { return {n}; }
  static Repeat until_interrupted() { return {}; }
};

inline constexpr double kDefaultTick = 0.02;  // one frame per 50 Hz PWM period

struct ExecuteOptions {
  double tick = kDefaultTick;
  Repeat repeat = Repeat::times(1);
  /// Frame issued when interrupted. Empty means every servo at 90°.
  JointTargets neutral;
};

/// Frame-by-frame playback of one sequence on a bus. Each step() issues one
/// frame for every joint and then advances the bus by one tick.
class GaitRun {
 public:
  GaitRun(GaitSequence seq, const RobotBodyConfig& body, hal::ServoBus& bus, ExecuteOptions options);

  /// Issues the next frame, or the neutral frame when `interrupt` is set.
  /// No-op once done().
  void step(bool interrupt);
  bool done() const noexcept { return done_; }
  const TaskOutcome& outcome() const noexcept { return outcome_; }
  const GaitSequence& sequence() const noexcept { return seq_; }
  /// Number of frames the run will issue if never interrupted; empty when unbounded.
  std::optional<std::size_t> planned_frames() const noexcept { return planned_; }

 private:
  void issue(const JointTargets& targets);

  GaitSequence seq_;
  const RobotBodyConfig& body_;
  hal::ServoBus& bus_;
  ExecuteOptions options_;
  std::optional<std::size_t> planned_;
  std::size_t next_frame_ = 0;
  bool done_ = false;
  TaskOutcome outcome_;
};

/// Called after every frame; a real-time caller sleeps here.
using Pacer = std::function<void(std::size_t frame_index)>;

/// Blocking playback. `interrupt` is polled before every frame; once it is
/// raised the bus receives the neutral stance and the outcome is Interrupted.
/// Bus errors end the run as Faulted.
TaskOutcome execute(const GaitSequence& seq, const RobotBodyConfig& body, hal::ServoBus& bus,
                    std::stop_token interrupt, ExecuteOptions options = {}, const Pacer& pacer = {});

/// A pacer that sleeps so frame k is issued k·tick seconds after the first.
Pacer realtime_pacer(double tick);

}  // namespace humanoid::gait
