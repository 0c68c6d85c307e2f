#include "humanoid/gait/executor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <thread>

#include "humanoid/error.hpp"
#include "humanoid/gait/generators.hpp"
#include "humanoid/gait/pwm.hpp"

namespace humanoid::gait {

std::string_view to_string(TaskOutcome::Status status) {
  switch (status) {
    case TaskOutcome::Status::Completed: return "completed";
    case TaskOutcome::Status::Interrupted: return "interrupted";
    case TaskOutcome::Status::Faulted: return "faulted";
  }
  return "unknown";
}

GaitRun::GaitRun(GaitSequence seq, const RobotBodyConfig& body, hal::ServoBus& bus,
                 ExecuteOptions options)
    : seq_(std::move(seq)), body_(body), bus_(bus), options_(std::move(options)) {
  if (!(options_.tick > 0.0)) throw Error(Errc::PreconditionViolation, "tick must be positive");
  validate(seq_, body_);
  if (options_.neutral.empty()) options_.neutral = neutral_stance(GaitParams{}, body_);

  if (!seq_.cyclic) {
    planned_ = static_cast<std::size_t>(std::ceil(seq_.duration() / options_.tick - 1e-9)) + 1;
  } else if (options_.repeat.count) {
    if (*options_.repeat.count < 1) throw Error(Errc::PreconditionViolation, "repeat count must be >= 1");
    const auto per_cycle = static_cast<std::size_t>(std::llround(seq_.period / options_.tick));
    // The extra frame lands on the closing keyframe of the last cycle.
    planned_ = per_cycle * static_cast<std::size_t>(*options_.repeat.count) + 1;
  }
}

void GaitRun::issue(const JointTargets& targets) {
  for (const auto& spec : body_.servos) {
    auto it = targets.find(spec.id);
    if (it == targets.end()) throw Error(Errc::JointSetMismatch, "no target for " + spec.id);
    bus_.set_pulse(spec.channel, angle_to_pulse(it->second, spec));
  }
  bus_.tick(options_.tick);
  ++outcome_.frames_emitted;
  outcome_.elapsed += options_.tick;
}

void GaitRun::step(bool interrupt) {
  if (done_) return;
  try {
    if (interrupt) {
      issue(options_.neutral);
      outcome_.status = TaskOutcome::Status::Interrupted;
      done_ = true;
      return;
    }
    double t = static_cast<double>(next_frame_) * options_.tick;
    if (!seq_.cyclic) t = std::min(t, seq_.duration());
    issue(sample(seq_, t));
    ++next_frame_;
    if (planned_ && next_frame_ >= *planned_) {
      outcome_.status = TaskOutcome::Status::Completed;
      done_ = true;
    }
  } catch (const Error& e) {
    outcome_.status = TaskOutcome::Status::Faulted;
    outcome_.reason = e.what();
    done_ = true;
  }
}

TaskOutcome execute(const GaitSequence& seq, const RobotBodyConfig& body, hal::ServoBus& bus,
                    std::stop_token interrupt, ExecuteOptions options, const Pacer& pacer) {
  GaitRun run(seq, body, bus, std::move(options));
  for (std::size_t frame = 0; !run.done(); ++frame) {
    run.step(interrupt.stop_requested());
    if (pacer && !run.done()) pacer(frame);
  }
  return run.outcome();
}

Pacer realtime_pacer(double tick) {
  using clock = std::chrono::steady_clock;
  auto start = std::make_shared<std::optional<clock::time_point>>();
  return [start, tick](std::size_t frame) {
    if (!*start) *start = clock::now() - std::chrono::duration_cast<clock::duration>(
                                              std::chrono::duration<double>(tick * static_cast<double>(frame)));
    std::this_thread::sleep_until(**start + std::chrono::duration_cast<clock::duration>(
                                                std::chrono::duration<double>(tick * static_cast<double>(frame + 1))));
  };
}

}  // namespace humanoid::gait
