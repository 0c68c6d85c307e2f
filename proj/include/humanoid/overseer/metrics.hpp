#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "humanoid/overseer/events.hpp"

namespace humanoid::overseer {

enum class Feature { ChatbotTurns, Walk, Run, Turn, Pickup, AssistantQueries, Errors };
inline constexpr std::size_t kFeatureCount = 7;

/// CSV row names, in export order.
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "chatbot_turns", "walk", "run", "turn", "pickup", "assistant_queries", "errors"};

class SessionMetrics {
 public:
  void increment(Feature f) { ++counts_[static_cast<std::size_t>(f)]; }
  std::uint64_t count(Feature f) const { return counts_[static_cast<std::size_t>(f)]; }
  const std::array<std::uint64_t, kFeatureCount>& counts() const noexcept { return counts_; }

  nlohmann::json to_json() const;

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;

 private:
  friend SessionMetrics read_metrics(const std::filesystem::path& path);
  std::array<std::uint64_t, kFeatureCount> counts_{};
};

/// `feature,count` with the fixed row order. Returns the row count (always 7).
/// Throws IoFailure.
std::size_t export_metrics(const SessionMetrics& metrics, const std::filesystem::path& path);

/// Throws IoFailure or CorruptFile.
SessionMetrics read_metrics(const std::filesystem::path& path);

/// ErrorReports as JSON lines, appended and flushed as they arrive.
class ErrorLog {
 public:
  ErrorLog() = default;
  /// Truncates the file. Throws IoFailure.
  explicit ErrorLog(const std::filesystem::path& path);
  void append(const event::ErrorReport& report);
  const std::vector<event::ErrorReport>& reports() const noexcept { return reports_; }

 private:
  std::filesystem::path path_;
  std::vector<event::ErrorReport> reports_;
};

}  // namespace humanoid::overseer
