#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "humanoid/overseer/config.hpp"
#include "humanoid/overseer/session.hpp"

namespace humanoid::overseer {

struct ScriptLine {
  double time = 0.0;
  std::string text;
};

/// One utterance per line; blank lines and lines starting with '#' are
/// skipped. "@2.5 walk" pins an utterance to t = 2.5 s; other lines come
/// `gap` seconds after the previous one, the first at t = 0.
/// Throws InvalidConfig for malformed or decreasing times.
std::vector<ScriptLine> parse_script(std::istream& in, double gap);
std::vector<ScriptLine> load_script(const std::filesystem::path& path, double gap);

/// Plays a script on a simulated-time session, then lets the session idle
/// for `gap` and finishes it. Returns the number of utterances handled.
std::size_t run_script(Session& session, const std::vector<ScriptLine>& script, double gap);

struct Utterance {
  std::string text;
  std::string source;
};

/// Thread-safe hand-off from input threads (stdin, gateway) to the session loop.
class TranscriptQueue {
 public:
  void push(Utterance u);
  void close();
  /// Waits up to `timeout`; empty when nothing arrived.
  std::optional<Utterance> pop_for(std::chrono::duration<double> timeout);
  bool drained() const;

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Utterance> items_;
  bool closed_ = false;
};

/// Realtime session loop: polls the session every tick and feeds it queued
/// transcripts until the queue is closed and drained, a shutdown command
/// arrives, or `stop` is requested. Finishes the session on the way out.
void run_realtime(Session& session, TranscriptQueue& queue, std::stop_token stop, double tick);

/// Everything a session needs, assembled from a RuntimeConfig.
class Runtime {
 public:
  /// Loads the corpus, fixture and model; trains (seeded) and saves the
  /// model when the file is missing. Throws IoFailure / InvalidConfig /
  /// CorruptFile.
  Runtime(RuntimeConfig config, Timing timing);

  Session& session() noexcept { return *session_; }
  hal::SimulatedServoBus& bus() noexcept { return *bus_; }
  hal::SimulatedDisplay& display() noexcept { return display_; }
  const RuntimeConfig& config() const noexcept { return config_; }
  /// Set when the model was trained during construction.
  const std::optional<std::string>& training_note() const noexcept { return training_note_; }

  /// Writes metrics, trace and growth log to the configured paths.
  void write_outputs() const;

 private:
  RuntimeConfig config_;
  std::unique_ptr<hal::SimulatedServoBus> bus_;
  hal::SimulatedDisplay display_;
  std::optional<std::string> training_note_;
  std::unique_ptr<Session> session_;
};

}  // namespace humanoid::overseer
