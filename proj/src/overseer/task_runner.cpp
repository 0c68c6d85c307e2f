#include "humanoid/overseer/task_runner.hpp"

#include "humanoid/error.hpp"

namespace humanoid::overseer {

void InlineTaskRunner::start(gait::GaitSequence seq, gait::ExecuteOptions options, hal::BusLease lease) {
  if (active()) throw Error(Errc::PreconditionViolation, "a task is already running");
  run_.emplace(std::move(seq), body_, bus_, std::move(options));
  lease_.emplace(std::move(lease));
}

void InlineTaskRunner::step() {
  if (active()) run_->step(false);
}

gait::TaskOutcome InlineTaskRunner::stop() {
  if (!run_) throw Error(Errc::PreconditionViolation, "no task to stop");
  run_->step(true);
  auto outcome = run_->outcome();
  run_.reset();
  lease_.reset();
  return outcome;
}

std::optional<gait::TaskOutcome> InlineTaskRunner::take_finished() {
  if (!run_ || !run_->done()) return std::nullopt;
  auto outcome = run_->outcome();
  run_.reset();
  lease_.reset();
  return outcome;
}

ThreadedTaskRunner::~ThreadedTaskRunner() {
  if (worker_.joinable()) {
    worker_.request_stop();
    worker_.join();
  }
}

void ThreadedTaskRunner::start(gait::GaitSequence seq, gait::ExecuteOptions options, hal::BusLease lease) {
  if (running_) throw Error(Errc::PreconditionViolation, "a task is already running");
  if (worker_.joinable()) worker_.join();
  finished_ = false;
  running_ = true;
  worker_ = std::jthread([this, seq = std::move(seq), options = std::move(options),
                          lease = std::move(lease)](std::stop_token token) mutable {
    const double tick = options.tick;
    outcome_ = gait::execute(seq, body_, bus_, token, std::move(options), gait::realtime_pacer(tick));
    { auto released = std::move(lease); }
    finished_ = true;
  });
}

bool ThreadedTaskRunner::active() const { return running_ && !finished_; }

gait::TaskOutcome ThreadedTaskRunner::stop() {
  if (!running_) throw Error(Errc::PreconditionViolation, "no task to stop");
  worker_.request_stop();
  worker_.join();
  running_ = false;
  return outcome_;
}

std::optional<gait::TaskOutcome> ThreadedTaskRunner::take_finished() {
  if (!running_ || !finished_) return std::nullopt;
  worker_.join();
  running_ = false;
  return outcome_;
}

}  // namespace humanoid::overseer
