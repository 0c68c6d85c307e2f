#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>

#include "humanoid/gait/executor.hpp"
#include "humanoid/hal/servo_bus.hpp"

namespace humanoid::overseer {

/// Owns the one gait execution the session may have. The lease is held for
/// as long as the run is active.
class TaskRunner {
 public:
  virtual ~TaskRunner() = default;

  virtual void start(gait::GaitSequence seq, gait::ExecuteOptions options, hal::BusLease lease) = 0;
  virtual bool active() const = 0;
  /// Raises the interrupt and returns the outcome; the neutral frame has
  /// been issued by the time this returns.
  virtual gait::TaskOutcome stop() = 0;
  /// Outcome of a run that ended by itself, exactly once.
  virtual std::optional<gait::TaskOutcome> take_finished() = 0;
};

/// Steps the run from the caller's thread, one frame per step(); used for
/// simulated time.
class InlineTaskRunner final : public TaskRunner {
 public:
  InlineTaskRunner(const gait::RobotBodyConfig& body, hal::ServoBus& bus) : body_(body), bus_(bus) {}

  void start(gait::GaitSequence seq, gait::ExecuteOptions options, hal::BusLease lease) override;
  bool active() const override { return run_.has_value() && !run_->done(); }
  gait::TaskOutcome stop() override;
  std::optional<gait::TaskOutcome> take_finished() override;

  /// Issues the next frame (which also ticks the bus). No-op when idle.
  void step();

 private:
  const gait::RobotBodyConfig& body_;
  hal::ServoBus& bus_;
  std::optional<gait::GaitRun> run_;
  std::optional<hal::BusLease> lease_;
};

/// Runs execute() on its own thread, paced to wall-clock ticks; the stop
/// token is the interrupt flag.
class ThreadedTaskRunner final : public TaskRunner {
 public:
  ThreadedTaskRunner(const gait::RobotBodyConfig& body, hal::ServoBus& bus) : body_(body), bus_(bus) {}
  ~ThreadedTaskRunner() override;

  void start(gait::GaitSequence seq, gait::ExecuteOptions options, hal::BusLease lease) override;
  bool active() const override;
  gait::TaskOutcome stop() override;
  std::optional<gait::TaskOutcome> take_finished() override;

 private:
  const gait::RobotBodyConfig& body_;
  hal::ServoBus& bus_;
  std::jthread worker_;
  std::atomic<bool> running_{false};
  std::atomic<bool> finished_{false};
  gait::TaskOutcome outcome_;  // written by the worker before finished_
};

}  // namespace humanoid::overseer
