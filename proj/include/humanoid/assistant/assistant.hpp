#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace humanoid::assistant {

namespace ask {
struct Date {
  friend bool operator==(const Date&, const Date&) = default;
};
struct OnThisDay {
  friend bool operator==(const OnThisDay&, const OnThisDay&) = default;
};
struct Summarize {
  std::string topic;
  friend bool operator==(const Summarize&, const Summarize&) = default;
};
struct Translate {
  std::string text;
  std::string language;
  friend bool operator==(const Translate&, const Translate&) = default;
};
struct Unknown {
  friend bool operator==(const Unknown&, const Unknown&) = default;
};
}  // namespace ask

using DetectedIntent = std::variant<ask::Date, ask::OnThisDay, ask::Summarize, ask::Translate, ask::Unknown>;

struct AssistantQuery {
  std::string text;
  DetectedIntent intent;
};

std::string_view kind_name(const DetectedIntent& intent);

/// Keyword patterns over the normalized text:
///   "what is the date", "what day is it", "todays date"   → Date
///   "on this day", "today in history", "this day in history" → OnThisDay
///   "tell me about X", "summary of X", "summarize X"      → Summarize(X)
///   "translate W to L", "translate W into L"              → Translate(W, L)
AssistantQuery parse_query(std::string_view text);

struct AssistantAnswer {
  std::string text;
  std::string provider;
  bool offline = true;
  bool handled = false;  // false for the fallback reply

  friend bool operator==(const AssistantAnswer&, const AssistantAnswer&) = default;
};

/// Offline stand-in for web lookups. Keys are stored lowercased.
struct KnowledgeFixture {
  std::map<std::string, std::string> topics;
  std::map<std::string, std::string> on_this_day;  // "MM-DD" → event
  std::map<std::string, std::map<std::string, std::string>> dictionary;  // language → word → translation

  std::optional<std::string> topic(std::string_view name) const;
  std::optional<std::string> event_on(unsigned month, unsigned day) const;
  std::optional<std::string> translate(std::string_view word, std::string_view language) const;
};

/// Throws CorruptFile when sections have the wrong shape.
KnowledgeFixture fixture_from_json(const nlohmann::json& j);
/// Throws IoFailure or CorruptFile.
KnowledgeFixture load_fixture(const std::filesystem::path& path);

using Clock = std::function<std::chrono::system_clock::time_point()>;
Clock system_clock();
Clock fixed_clock(std::chrono::year_month_day date);

/// "Friday, March 1, 2024".
std::string format_date(std::chrono::year_month_day date);

/// One source of answers. Returns nullopt for queries it does not serve.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual std::string_view name() const = 0;
  virtual std::optional<AssistantAnswer> try_answer(const AssistantQuery& query) const = 0;
};

/// Asks each provider in order; falls back to a polite reply.
class ProviderChain {
 public:
  void add(std::unique_ptr<Provider> provider);
  AssistantAnswer answer(const AssistantQuery& query) const;
  std::size_t size() const noexcept { return providers_.size(); }

 private:
  std::vector<std::unique_ptr<Provider>> providers_;
};

/// Date, on-this-day, topic and dictionary providers over one fixture.
/// The chain keeps its own copy of the fixture.
ProviderChain offline_chain(KnowledgeFixture fixture, Clock clock);

inline constexpr std::string_view kFallbackProvider = "fallback";

/// Never fails: unknown queries and missing entries get a fallback answer.
AssistantAnswer answer(const AssistantQuery& query, const KnowledgeFixture& fixture, const Clock& clock);

}  // namespace humanoid::assistant
