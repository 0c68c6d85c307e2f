#include "humanoid/overseer/runtime.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "humanoid/error.hpp"
#include "humanoid/intent/trainer.hpp"

namespace humanoid::overseer {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<ScriptLine> parse_script(std::istream& in, double gap) {
  std::vector<ScriptLine> out;
  std::string raw;
  std::size_t line_no = 0;
  std::optional<double> prev;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    double t = prev ? *prev + gap : 0.0;
    if (line.front() == '@') {
      const auto space = line.find_first_of(" \t");
      const auto stamp = line.substr(1, space == std::string_view::npos ? line.size() - 1 : space - 1);
      double at = 0.0;
      auto [ptr, ec] = std::from_chars(stamp.data(), stamp.data() + stamp.size(), at);
      if (ec != std::errc() || ptr != stamp.data() + stamp.size() || at < 0.0) {
        throw Error(Errc::InvalidConfig, "script line " + std::to_string(line_no) + ": bad time '" +
                                             std::string(stamp) + "'");
      }
      if (prev && at < *prev) {
        throw Error(Errc::InvalidConfig, "script line " + std::to_string(line_no) + ": time goes backwards");
      }
      t = at;
      line = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
      if (line.empty()) throw Error(Errc::InvalidConfig, "script line " + std::to_string(line_no) + ": no text");
    }
    out.push_back({t, std::string(line)});
    prev = t;
  }
  return out;
}

std::vector<ScriptLine> load_script(const std::filesystem::path& path, double gap) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open script " + path.string());
  return parse_script(in, gap);
}

std::size_t run_script(Session& session, const std::vector<ScriptLine>& script, double gap) {
  std::size_t handled = 0;
  for (const auto& line : script) {
    session.advance_to(line.time);
    ++handled;
    if (!session.handle_transcript(line.text, "script")) break;
  }
  if (!session.shut_down()) session.advance_to(session.now() + gap);
  session.finish(session.shut_down());
  return handled;
}

void TranscriptQueue::push(Utterance u) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    items_.push_back(std::move(u));
  }
  cv_.notify_one();
}

void TranscriptQueue::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::optional<Utterance> TranscriptQueue::pop_for(std::chrono::duration<double> timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return !items_.empty() || closed_; });
  if (items_.empty()) return std::nullopt;
  auto u = std::move(items_.front());
  items_.pop_front();
  return u;
}

bool TranscriptQueue::drained() const {
  std::lock_guard lock(mutex_);
  return closed_ && items_.empty();
}

void run_realtime(Session& session, TranscriptQueue& queue, std::stop_token stop, double tick) {
  bool shutdown = false;
  while (!stop.stop_requested() && !shutdown && !queue.drained()) {
    session.poll();
    if (auto u = queue.pop_for(std::chrono::duration<double>(tick))) {
      shutdown = !session.handle_transcript(u->text, u->source);
    }
  }
  session.finish(shutdown || stop.stop_requested());
}

namespace {

void ensure_parent(const std::optional<std::filesystem::path>& p) {
  if (!p || p->parent_path().empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(p->parent_path(), ec);
  if (ec) throw Error(Errc::IoFailure, "cannot create " + p->parent_path().string() + ": " + ec.message());
}

}  // namespace

Runtime::Runtime(RuntimeConfig config, Timing timing) : config_(std::move(config)) {
  for (const auto& p : {std::optional(config_.model), config_.outputs.metrics, config_.outputs.trace,
                        config_.outputs.error_log, config_.outputs.growth_log}) {
    ensure_parent(p);
  }
  auto corpus = intent::load_corpus(config_.intents);
  intent::TrainedModel model;
  if (std::filesystem::exists(config_.model)) {
    model = intent::load_model(config_.model);
  } else {
    intent::TrainingConfig tc;
    tc.seed = config_.seed;
    auto result = intent::train(corpus, tc);
    model = std::move(result.model);
    intent::save_model(model, config_.model);
    training_note_ = "trained " + config_.model.string() + " (seed " + std::to_string(config_.seed) +
                     ", accuracy " + std::to_string(result.history.back().accuracy) + ")";
  }
  auto fixture = assistant::load_fixture(config_.fixture);
  auto clock = config_.clock_date ? assistant::fixed_clock(*config_.clock_date) : assistant::system_clock();

  bus_ = std::make_unique<hal::SimulatedServoBus>(config_.body, config_.jitter, config_.bus_seed);
  session_ = std::make_unique<Session>(Knowledge{std::move(model), std::move(corpus), std::move(fixture), clock},
                                       bus_->body(), *bus_, display_, session_options(config_), timing);
  if (config_.outputs.error_log) session_->set_error_log(ErrorLog(*config_.outputs.error_log));
}

void Runtime::write_outputs() const {
  if (config_.outputs.metrics) export_metrics(session_->metrics(), *config_.outputs.metrics);
  if (config_.outputs.trace) bus_->export_trace(*config_.outputs.trace);
  if (config_.outputs.growth_log) session_->growth().write_jsonl(*config_.outputs.growth_log);
}

}  // namespace humanoid::overseer
