#include "humanoid/overseer/session.hpp"

#include <thread>

#include "humanoid/error.hpp"

namespace humanoid::overseer {
namespace {

constexpr double kTimeEpsilon = 1e-9;

bool cyclic_until_stopped(const gait::TaskCommand& c) {
  return std::holds_alternative<gait::cmd::Walk>(c) || std::holds_alternative<gait::cmd::Run>(c);
}

std::optional<Feature> feature_of(const gait::TaskCommand& c) {
  if (std::holds_alternative<gait::cmd::Walk>(c)) return Feature::Walk;
  if (std::holds_alternative<gait::cmd::Run>(c)) return Feature::Run;
  if (std::holds_alternative<gait::cmd::Turn>(c)) return Feature::Turn;
  if (std::holds_alternative<gait::cmd::PickUp>(c)) return Feature::Pickup;
  return std::nullopt;
}

}  // namespace

SessionOptions session_options(const RuntimeConfig& config) {
  return {config.gait, config.tick, config.turn_cycles, config.seed, config.restart, config.faults};
}

Session::Session(Knowledge knowledge, const gait::RobotBodyConfig& body, hal::ServoBus& bus,
                 hal::SimulatedDisplay& display, SessionOptions options, Timing timing)
    : knowledge_(std::move(knowledge)),
      providers_(assistant::offline_chain(knowledge_.fixture, knowledge_.clock)),
      body_(body),
      bus_(bus),
      display_(display),
      options_(std::move(options)),
      timing_(timing),
      supervisor_(options_.restart),
      rng_(options_.seed),
      fault_fired_(options_.faults.size(), false) {
  if (!(options_.tick > 0.0)) throw Error(Errc::InvalidConfig, "tick must be positive");
  gait::validate(options_.gait);
  for (auto name : segment::kAll) supervisor_.add(std::string(name));
  if (timing_ == Timing::Simulated) {
    auto runner = std::make_unique<InlineTaskRunner>(body_, bus_);
    inline_runner_ = runner.get();
    runner_ = std::move(runner);
  } else {
    runner_ = std::make_unique<ThreadedTaskRunner>(body_, bus_);
  }
  display_.show(hal::glyph::idle());
}

Session::~Session() = default;

void Session::subscribe(Subscriber subscriber) {
  std::lock_guard lock(mutex_);
  subscribers_.push_back(std::move(subscriber));
}

void Session::set_error_log(ErrorLog log) {
  std::lock_guard lock(mutex_);
  errors_ = std::move(log);
}

double Session::now_locked() const {
  if (timing_ == Timing::Simulated) return static_cast<double>(frame_) * options_.tick;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
}

double Session::now() const {
  std::lock_guard lock(mutex_);
  return now_locked();
}

void Session::emit(double t, RuntimeEvent ev) {
  if (const auto* report = std::get_if<event::ErrorReport>(&ev)) {
    metrics_.increment(Feature::Errors);
    errors_.append(*report);
    display_.show(hal::glyph::cross());
  }
  events_.push_back({t, std::move(ev)});
  for (const auto& s : subscribers_) s(events_.back());
}

void Session::emit_all(double t, std::vector<RuntimeEvent> evs) {
  for (auto& e : evs) emit(t, std::move(e));
}

void Session::fail(std::string_view segment, std::string reason, double t) {
  emit_all(t, supervisor_.fail(segment, std::move(reason), t));
}

void Session::inject_fault(std::string_view segment, std::string reason) {
  std::lock_guard lock(mutex_);
  fail(segment, std::move(reason), now_locked());
}

void Session::process_due(double t) {
  for (std::size_t i = 0; i < options_.faults.size(); ++i) {
    const auto& f = options_.faults[i];
    if (!fault_fired_[i] && f.at <= t + kTimeEpsilon) {
      fault_fired_[i] = true;
      fail(f.segment, "injected fault", t);
    }
  }
  for (auto& ev : supervisor_.poll(t)) {
    const std::string name = std::get<event::SegmentRestarted>(ev).segment;
    emit(t, std::move(ev));
    for (std::size_t i = 0; i < options_.faults.size(); ++i) {
      if (fault_fired_[i] && options_.faults[i].persistent && options_.faults[i].segment == name) {
        fail(name, "injected fault (persistent)", t);
        break;
      }
    }
  }
}

void Session::finish_task(const gait::TaskOutcome& outcome, double t) {
  const std::string name = active_task_.value_or("task");
  active_task_.reset();
  emit(t, event::TaskFinished{name, outcome});
  if (outcome.status == gait::TaskOutcome::Status::Faulted) {
    fail(segment::kTaskParser, name + ": " + outcome.reason, t);
  } else {
    display_.show(hal::glyph::smile());
  }
}

void Session::collect_finished(double t) {
  if (auto outcome = runner_->take_finished()) finish_task(*outcome, t);
}

void Session::advance_to(double t) {
  std::lock_guard lock(mutex_);
  if (timing_ != Timing::Simulated) throw Error(Errc::PreconditionViolation, "advance_to needs simulated timing");
  while (static_cast<double>(frame_) * options_.tick < t - kTimeEpsilon) {
    process_due(now_locked());
    if (inline_runner_->active()) {
      inline_runner_->step();
    } else {
      bus_.tick(options_.tick);
    }
    ++frame_;
    collect_finished(now_locked());
  }
  process_due(now_locked());
}

void Session::poll() {
  std::lock_guard lock(mutex_);
  if (timing_ != Timing::Realtime) return;
  const double t = now_locked();
  collect_finished(t);
  process_due(t);
}

void Session::set_mode(Mode mode, double t) {
  if (mode_ == mode) return;
  mode_ = mode;
  emit(t, event::ModeChanged{mode});
}

void Session::start_task(const gait::TaskCommand& command, double t) {
  const auto name = gait::describe(command);
  gait::GaitSequence seq;
  gait::ExecuteOptions opts;
  opts.tick = options_.tick;
  try {
    opts.neutral = gait::neutral_stance(options_.gait, body_);
    if (std::holds_alternative<gait::cmd::Walk>(command)) {
      seq = gait::generate_walk_cycle(options_.gait, body_);
      opts.repeat = gait::Repeat::until_interrupted();
    } else if (std::holds_alternative<gait::cmd::Run>(command)) {
      seq = gait::generate_run_cycle(options_.gait, body_);
      opts.repeat = gait::Repeat::until_interrupted();
    } else if (const auto* turn = std::get_if<gait::cmd::Turn>(&command)) {
      seq = gait::generate_turn(options_.gait, body_, turn->direction);
      opts.repeat = gait::Repeat::times(options_.turn_cycles);
    } else if (const auto* pick = std::get_if<gait::cmd::PickUp>(&command)) {
      seq = gait::generate_pickup(pick->object, body_, options_.gait);
    }
  } catch (const Error& e) {
    fail(segment::kTaskParser, name + ": " + e.what(), t);
    return;
  }
  auto lease = arbiter_.try_acquire(name);
  if (!lease) {
    emit(t, event::Notice{"the servo bus is held by " + arbiter_.owner().value_or("another task")});
    return;
  }
  runner_->start(std::move(seq), std::move(opts), std::move(*lease));
  active_task_ = name;
  active_is_cyclic_ = cyclic_until_stopped(command);
  display_.show(hal::glyph::idle());
  emit(t, event::TaskStarted{name});
}

void Session::dispatch_task(const gait::TaskCommand& command, double t) {
  emit(t, event::CommandDetected{command});

  if (std::holds_alternative<gait::cmd::Stop>(command)) {
    // Stop bypasses the task parser so it works even while that segment is down.
    if (!runner_->active()) {
      emit(t, event::Notice{"nothing to stop"});
      return;
    }
    const auto outcome = runner_->stop();
    if (timing_ == Timing::Simulated) ++frame_;  // the neutral frame advanced the bus one tick
    finish_task(outcome, now_locked());
    return;
  }
  if (const auto* mode = std::get_if<gait::cmd::AssistantMode>(&command)) {
    set_mode(mode->enter ? Mode::Assistant : Mode::Normal, t);
    return;
  }

  if (auto f = feature_of(command)) metrics_.increment(*f);
  set_mode(Mode::Normal, t);
  if (!supervisor_.available(segment::kTaskParser)) {
    emit(t, event::Notice{"movement is unavailable right now; ignoring \"" + gait::describe(command) + "\""});
    return;
  }
  if (runner_->active()) {
    emit(t, event::Notice{"busy with " + active_task_.value_or("a task") + "; say stop first"});
    return;
  }
  start_task(command, t);
}

void Session::dispatch_chat(std::string_view text, double t) {
  metrics_.increment(Feature::ChatbotTurns);
  if (!supervisor_.available(segment::kChatbot)) {
    emit(t, event::Notice{"I can't chat right now, but I can still move."});
    return;
  }
  try {
    auto reply = intent::respond(knowledge_.model, knowledge_.corpus, text, rng_, growth_, t);
    emit(t, event::ChatTurn{std::string(text), std::move(reply.text), std::move(reply.tag), reply.confidence});
  } catch (const std::exception& e) {
    fail(segment::kChatbot, e.what(), t);
  }
}

void Session::dispatch_assistant(std::string_view text, double t) {
  metrics_.increment(Feature::AssistantQueries);
  if (!supervisor_.available(segment::kAssistant)) {
    emit(t, event::Notice{"The assistant is unavailable right now."});
    return;
  }
  try {
    const auto query = assistant::parse_query(text);
    auto answer = providers_.answer(query);
    emit(t, event::AssistantAnswered{std::string(text), std::string(assistant::kind_name(query.intent)),
                                     std::move(answer.text), std::move(answer.provider)});
  } catch (const std::exception& e) {
    fail(segment::kAssistant, e.what(), t);
  }
}

bool Session::handle_transcript(std::string_view text, std::string_view source) {
  std::lock_guard lock(mutex_);
  if (shut_down_) return false;
  const double t = now_locked();
  if (timing_ == Timing::Realtime) collect_finished(t);
  process_due(t);

  if (!supervisor_.available(segment::kSpeech)) {
    emit(t, event::Notice{"speech input is down; dropped \"" + std::string(text) + "\""});
    return true;
  }
  emit(t, event::Transcript{std::string(text), std::string(source)});

  const auto r = route(text, mode_);
  if (std::holds_alternative<routes::Shutdown>(r)) {
    emit(t, event::Notice{"shutting down"});
    shut_down_ = true;
    return false;
  }
  if (const auto* task = std::get_if<routes::Task>(&r)) {
    dispatch_task(task->command, t);
  } else if (std::holds_alternative<routes::Chat>(r)) {
    dispatch_chat(text, t);
  } else {
    dispatch_assistant(text, t);
  }
  return true;
}

void Session::finish(bool interrupt_all) {
  std::unique_lock lock(mutex_);
  if (timing_ == Timing::Realtime) collect_finished(now_locked());
  if (!runner_->active()) return;
  if (interrupt_all || active_is_cyclic_) {
    const auto outcome = runner_->stop();
    if (timing_ == Timing::Simulated) ++frame_;
    finish_task(outcome, now_locked());
    return;
  }
  if (timing_ == Timing::Simulated) {
    while (runner_->active()) advance_to(now_locked() + options_.tick);
    return;
  }
  while (runner_->active()) {
    lock.unlock();
    std::this_thread::sleep_for(std::chrono::duration<double>(options_.tick));
    lock.lock();
  }
  collect_finished(now_locked());
}

SessionStatus Session::status() const {
  std::lock_guard lock(mutex_);
  return {now_locked(), mode_, active_task_, supervisor_.states(), metrics_, shut_down_};
}

std::vector<TimedEvent> Session::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

SessionMetrics Session::metrics() const {
  std::lock_guard lock(mutex_);
  return metrics_;
}

bool Session::shut_down() const {
  std::lock_guard lock(mutex_);
  return shut_down_;
}

bool Session::available(std::string_view segment) const {
  std::lock_guard lock(mutex_);
  return supervisor_.available(segment);
}

}  // namespace humanoid::overseer
