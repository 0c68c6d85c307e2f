#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "humanoid/assistant/assistant.hpp"
#include "humanoid/gait/generators.hpp"
#include "humanoid/hal/display.hpp"
#include "humanoid/hal/servo_bus.hpp"
#include "humanoid/intent/corpus.hpp"
#include "humanoid/intent/model.hpp"
#include "humanoid/overseer/config.hpp"
#include "humanoid/overseer/events.hpp"
#include "humanoid/overseer/metrics.hpp"
#include "humanoid/overseer/router.hpp"
#include "humanoid/overseer/supervisor.hpp"
#include "humanoid/overseer/task_runner.hpp"

namespace humanoid::overseer {

/// What the chatbot and assistant segments work from.
struct Knowledge {
  intent::TrainedModel model;
  intent::IntentCorpus corpus;
  assistant::KnowledgeFixture fixture;
  assistant::Clock clock;
};

struct SessionOptions {
  gait::GaitParams gait;
  double tick = gait::kDefaultTick;
  int turn_cycles = 2;
  std::uint64_t seed = 7;
  RestartPolicy restart;
  std::vector<FaultSpec> faults;
};

SessionOptions session_options(const RuntimeConfig& config);

/// Either simulated time advanced by the caller, or wall-clock time with the
/// gait running on its own thread.
enum class Timing { Simulated, Realtime };

struct SessionStatus {
  double time = 0.0;
  Mode mode = Mode::Normal;
  std::optional<std::string> active_task;
  std::vector<SegmentState> segments;
  SessionMetrics metrics;
  bool shut_down = false;
};

/// The overseer: routes transcripts, owns the single active task, supervises
/// segments and keeps metrics. All public members are safe to call from
/// several threads. Subscribers run with the session lock held and must not
/// call back into the session.
class Session {
 public:
  using Subscriber = std::function<void(const TimedEvent&)>;

  Session(Knowledge knowledge, const gait::RobotBodyConfig& body, hal::ServoBus& bus, hal::SimulatedDisplay& display,
          SessionOptions options, Timing timing);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  void subscribe(Subscriber subscriber);

  /// Routes and dispatches one utterance. Returns false once the session
  /// has been told to shut down.
  bool handle_transcript(std::string_view text, std::string_view source = "script");

  /// Simulated timing only: plays frames (the bus idles when no task runs),
  /// fires due faults and restarts, up to time t.
  void advance_to(double t);

  /// Realtime timing: collects a finished task, fires due faults and
  /// restarts at the current wall-clock time.
  void poll();

  /// Ends the session: finite tasks play out (simulated) or are awaited
  /// (realtime) unless `interrupt_all`; cyclic tasks are stopped.
  void finish(bool interrupt_all = false);

  double now() const;
  SessionStatus status() const;
  std::vector<TimedEvent> events() const;
  const intent::GrowthLog& growth() const noexcept { return growth_; }
  SessionMetrics metrics() const;
  const ErrorLog& error_log() const noexcept { return errors_; }
  void set_error_log(ErrorLog log);
  bool shut_down() const;
  bool available(std::string_view segment) const;
  /// Most tasks that ever held the servo bus at once; 1 once anything ran.
  int peak_bus_holders() const noexcept { return arbiter_.peak_holders(); }

  /// Crashes a segment now, as an injected fault would.
  void inject_fault(std::string_view segment, std::string reason = "injected fault");

 private:
  double now_locked() const;
  void emit(double t, RuntimeEvent ev);
  void emit_all(double t, std::vector<RuntimeEvent> evs);
  void fail(std::string_view segment, std::string reason, double t);
  void process_due(double t);
  void collect_finished(double t);
  void finish_task(const gait::TaskOutcome& outcome, double t);
  void dispatch_task(const gait::TaskCommand& command, double t);
  void start_task(const gait::TaskCommand& command, double t);
  void dispatch_chat(std::string_view text, double t);
  void dispatch_assistant(std::string_view text, double t);
  void set_mode(Mode mode, double t);

  Knowledge knowledge_;
  assistant::ProviderChain providers_;
  const gait::RobotBodyConfig& body_;
  hal::ServoBus& bus_;
  hal::SimulatedDisplay& display_;
  SessionOptions options_;
  Timing timing_;

  mutable std::recursive_mutex mutex_;
  std::vector<Subscriber> subscribers_;
  std::vector<TimedEvent> events_;
  Supervisor supervisor_;
  SessionMetrics metrics_;
  ErrorLog errors_;
  intent::GrowthLog growth_;
  std::mt19937_64 rng_;
  hal::BusArbiter arbiter_;
  std::unique_ptr<TaskRunner> runner_;
  InlineTaskRunner* inline_runner_ = nullptr;
  std::optional<std::string> active_task_;
  bool active_is_cyclic_ = false;
  Mode mode_ = Mode::Normal;
  bool shut_down_ = false;

  std::size_t frame_ = 0;  // simulated clock, in ticks
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();
  std::vector<bool> fault_fired_;
};

}  // namespace humanoid::overseer
