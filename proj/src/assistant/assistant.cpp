#include "humanoid/assistant/assistant.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>

#include "humanoid/error.hpp"
#include "humanoid/intent/text.hpp"

namespace humanoid::assistant {
namespace {

using Tokens = std::vector<std::string>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join(Tokens::const_iterator first, Tokens::const_iterator last) {
  std::string out;
  for (auto it = first; it != last; ++it) {
    if (!out.empty()) out += ' ';
    out += *it;
  }
  return out;
}

/// Position just past the first occurrence of `phrase`, if any.
std::optional<std::size_t> find_phrase(const Tokens& tokens, std::string_view phrase) {
  const auto words = intent::normalize_text(phrase);
  if (words.size() > tokens.size()) return std::nullopt;
  for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
    if (std::equal(words.begin(), words.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
      return i + words.size();
    }
  }
  return std::nullopt;
}

bool has_any(const Tokens& tokens, std::initializer_list<std::string_view> phrases) {
  return std::any_of(phrases.begin(), phrases.end(),
                     [&](std::string_view p) { return find_phrase(tokens, p).has_value(); });
}

std::string strip_article(std::string s) {
  for (std::string_view a : {"the ", "a ", "an "}) {
    if (s.starts_with(a) && s.size() > a.size()) return s.substr(a.size());
  }
  return s;
}

constexpr std::array<std::string_view, 12> kMonths = {"January", "February", "March",     "April",
                                                      "May",     "June",     "July",      "August",
                                                      "September", "October", "November", "December"};
constexpr std::array<std::string_view, 7> kWeekdays = {"Sunday",   "Monday", "Tuesday", "Wednesday",
                                                       "Thursday", "Friday", "Saturday"};

std::chrono::year_month_day today(const Clock& clock) {
  return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(clock())};
}

std::map<std::string, std::string> lowered_map(const nlohmann::json& j, std::string_view what) {
  if (!j.is_object()) throw Error(Errc::CorruptFile, "fixture: '" + std::string(what) + "' must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Error(Errc::CorruptFile, "fixture: " + std::string(what) + "." + k + " is not a string");
    out[lower(k)] = v.get<std::string>();
  }
  return out;
}

class DateProvider final : public Provider {
 public:
  explicit DateProvider(Clock clock) : clock_(std::move(clock)) {}
  std::string_view name() const override { return "clock"; }
  std::optional<AssistantAnswer> try_answer(const AssistantQuery& q) const override {
    if (!std::holds_alternative<ask::Date>(q.intent)) return std::nullopt;
    return AssistantAnswer{"Today is " + format_date(today(clock_)) + ".", std::string(name()), true, true};
  }

 private:
  Clock clock_;
};

class FixtureProvider final : public Provider {
 public:
  FixtureProvider(std::shared_ptr<const KnowledgeFixture> fixture, Clock clock)
      : fixture_(std::move(fixture)), clock_(std::move(clock)) {}
  std::string_view name() const override { return "fixture"; }

  std::optional<AssistantAnswer> try_answer(const AssistantQuery& q) const override {
    auto found = [&](std::string text) {
      return AssistantAnswer{std::move(text), std::string(name()), true, true};
    };
    if (std::holds_alternative<ask::OnThisDay>(q.intent)) {
      const auto d = today(clock_);
      auto event = fixture_->event_on(static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
      if (event) return found("On this day, " + std::string(kMonths[static_cast<unsigned>(d.month()) - 1]) + " " +
                              std::to_string(static_cast<unsigned>(d.day())) + ": " + *event);
    } else if (const auto* s = std::get_if<ask::Summarize>(&q.intent)) {
      if (auto text = fixture_->topic(s->topic)) return found(*text);
    } else if (const auto* t = std::get_if<ask::Translate>(&q.intent)) {
      if (auto word = fixture_->translate(t->text, t->language)) {
        return found("\"" + t->text + "\" in " + t->language + " is \"" + *word + "\".");
      }
    }
    return std::nullopt;
  }

 private:
  std::shared_ptr<const KnowledgeFixture> fixture_;
  Clock clock_;
};

AssistantAnswer fallback(const AssistantQuery& q) {
  std::string text;
  if (const auto* s = std::get_if<ask::Summarize>(&q.intent)) {
    text = "Sorry, I don't have a summary of " + s->topic + " offline.";
  } else if (const auto* t = std::get_if<ask::Translate>(&q.intent)) {
    text = "Sorry, I can't translate \"" + t->text + "\" into " + t->language + " offline.";
  } else if (std::holds_alternative<ask::OnThisDay>(q.intent)) {
    text = "Sorry, I don't know anything that happened on this day.";
  } else {
    text = "Sorry, I can tell you the date, what happened on this day, summarize a topic or translate a word.";
  }
  return {std::move(text), std::string(kFallbackProvider), true, false};
}

}  // namespace

std::string_view kind_name(const DetectedIntent& intent) {
  struct {
    std::string_view operator()(const ask::Date&) const { return "date"; }
    std::string_view operator()(const ask::OnThisDay&) const { return "on_this_day"; }
    std::string_view operator()(const ask::Summarize&) const { return "summarize"; }
    std::string_view operator()(const ask::Translate&) const { return "translate"; }
    std::string_view operator()(const ask::Unknown&) const { return "unknown"; }
  } visitor;
  return std::visit(visitor, intent);
}

AssistantQuery parse_query(std::string_view text) {
  const auto tokens = intent::normalize_text(text);
  AssistantQuery q{std::string(text), ask::Unknown{}};

  if (auto start = find_phrase(tokens, "translate")) {
    // The last "to"/"into" splits the phrase from the language.
    for (std::size_t i = tokens.size(); i-- > *start + 1;) {
      if ((tokens[i] == "to" || tokens[i] == "into") && i + 1 < tokens.size()) {
        q.intent = ask::Translate{join(tokens.begin() + static_cast<std::ptrdiff_t>(*start),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(i)),
                                  join(tokens.begin() + static_cast<std::ptrdiff_t>(i) + 1, tokens.end())};
        return q;
      }
    }
  }
  if (has_any(tokens, {"on this day", "today in history", "this day in history", "historical significance"})) {
    q.intent = ask::OnThisDay{};
    return q;
  }
  if (has_any(tokens, {"what is the date", "whats the date", "what day is it", "todays date",
                       "what is todays date", "tell me the date"})) {
    q.intent = ask::Date{};
    return q;
  }
  for (std::string_view lead : {"tell me about", "summary of", "summarize", "what do you know about"}) {
    if (auto start = find_phrase(tokens, lead); start && *start < tokens.size()) {
      q.intent = ask::Summarize{join(tokens.begin() + static_cast<std::ptrdiff_t>(*start), tokens.end())};
      return q;
    }
  }
  return q;
}

std::optional<std::string> KnowledgeFixture::topic(std::string_view name) const {
  const auto key = lower(name);
  if (auto it = topics.find(key); it != topics.end()) return it->second;
  if (auto it = topics.find(strip_article(key)); it != topics.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> KnowledgeFixture::event_on(unsigned month, unsigned day) const {
  char key[8];
  std::snprintf(key, sizeof key, "%02u-%02u", month % 100, day % 100);
  if (auto it = on_this_day.find(key); it != on_this_day.end()) return it->second;
  return std::nullopt;
}

std::optional<std::string> KnowledgeFixture::translate(std::string_view word, std::string_view language) const {
  auto lang = dictionary.find(lower(language));
  if (lang == dictionary.end()) return std::nullopt;
  if (auto it = lang->second.find(lower(word)); it != lang->second.end()) return it->second;
  return std::nullopt;
}

KnowledgeFixture fixture_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::CorruptFile, "fixture must be a JSON object");
  KnowledgeFixture f;
  if (j.contains("topics")) f.topics = lowered_map(j["topics"], "topics");
  if (j.contains("on_this_day")) f.on_this_day = lowered_map(j["on_this_day"], "on_this_day");
  if (j.contains("dictionary")) {
    const auto& dict = j["dictionary"];
    if (!dict.is_object()) throw Error(Errc::CorruptFile, "fixture: 'dictionary' must be an object");
    for (const auto& [language, words] : dict.items()) {
      f.dictionary[lower(language)] = lowered_map(words, "dictionary." + language);
    }
  }
  return f;
}

KnowledgeFixture load_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open fixture " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, path.string() + ": " + e.what());
  }
  return fixture_from_json(j);
}

Clock system_clock() {
  return [] { return std::chrono::system_clock::now(); };
}

Clock fixed_clock(std::chrono::year_month_day date) {
  const auto at = std::chrono::sys_days{date} + std::chrono::hours{12};
  return [at] { return std::chrono::system_clock::time_point{at}; };
}

std::string format_date(std::chrono::year_month_day date) {
  const std::chrono::weekday wd{std::chrono::sys_days{date}};
  return std::string(kWeekdays[wd.c_encoding()]) + ", " +
         std::string(kMonths[static_cast<unsigned>(date.month()) - 1]) + " " +
         std::to_string(static_cast<unsigned>(date.day())) + ", " + std::to_string(static_cast<int>(date.year()));
}

void ProviderChain::add(std::unique_ptr<Provider> provider) { providers_.push_back(std::move(provider)); }

AssistantAnswer ProviderChain::answer(const AssistantQuery& query) const {
  for (const auto& p : providers_) {
    if (auto a = p->try_answer(query)) return *a;
  }
  return fallback(query);
}

ProviderChain offline_chain(KnowledgeFixture fixture, Clock clock) {
  ProviderChain chain;
  chain.add(std::make_unique<DateProvider>(clock));
  chain.add(std::make_unique<FixtureProvider>(std::make_shared<const KnowledgeFixture>(std::move(fixture)),
                                              std::move(clock)));
  return chain;
}

AssistantAnswer answer(const AssistantQuery& query, const KnowledgeFixture& fixture, const Clock& clock) {
  return offline_chain(fixture, clock).answer(query);
}

}  // namespace humanoid::assistant
