#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "humanoid/gait/body.hpp"
#include "humanoid/gait/generators.hpp"
#include "humanoid/hal/servo_bus.hpp"
#include "humanoid/overseer/supervisor.hpp"

namespace humanoid::overseer {

struct TranscriptSourceSpec {
  enum class Kind { Interactive, Script, Gateway };
  Kind kind = Kind::Interactive;
  std::filesystem::path script;  // Script only

  friend bool operator==(const TranscriptSourceSpec&, const TranscriptSourceSpec&) = default;
};

/// "interactive" | "script:<path>" | "gateway". Throws InvalidConfig.
TranscriptSourceSpec parse_source(std::string_view text);

/// Crashes `segment` at session time `at`. A persistent fault crashes it
/// again every time it restarts, so it ends up parked.
struct FaultSpec {
  std::string segment;
  double at = 0.0;
  bool persistent = false;
};

struct OutputPaths {
  std::optional<std::filesystem::path> metrics;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> error_log;
  std::optional<std::filesystem::path> growth_log;
};

struct RuntimeConfig {
  std::string bus_type = "sim";
  hal::JitterMode jitter = hal::JitterMode::hardware();
  std::uint64_t bus_seed = 0;

  std::filesystem::path model;    // trained on startup if missing
  std::filesystem::path intents;
  std::filesystem::path fixture;

  gait::GaitParams gait;
  gait::RobotBodyConfig body = gait::default_body();

  std::string gateway_address = "127.0.0.1:8765";
  TranscriptSourceSpec source;
  std::uint64_t seed = 7;

  OutputPaths outputs;

  double utterance_gap = 1.0;  // script lines without an @time prefix
  double tick = 0.02;
  int turn_cycles = 2;
  /// Fixed assistant date; the system clock when empty.
  std::optional<std::chrono::year_month_day> clock_date;

  RestartPolicy restart;
  std::vector<FaultSpec> faults;
};

/// Relative paths are resolved against `base_dir`. Throws InvalidConfig.
RuntimeConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Throws IoFailure or InvalidConfig.
RuntimeConfig load_config(const std::filesystem::path& path);

}  // namespace humanoid::overseer
