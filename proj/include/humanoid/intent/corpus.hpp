#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace humanoid::intent {

struct Intent {
  std::string tag;
  std::vector<std::string> patterns;
  std::vector<std::string> responses;
  // Carried through load/save; nothing routes on it.
  std::optional<std::string> context;
};

/// Above this many tags the output layer is wider than half of the second
/// hidden layer; training still runs but a warning is logged.
inline constexpr std::size_t kRecommendedMaxTags = 32;

struct IntentCorpus {
  std::vector<Intent> intents;
  int version = 1;

  std::vector<std::string> tags() const;
  /// Index of `tag` in intents, or -1.
  std::ptrdiff_t tag_index(const std::string& tag) const;
};

/// Throws Errc::InvalidCorpus naming the first broken invariant.
void validate(const IntentCorpus& corpus);

/// True when the corpus has more intents than kRecommendedMaxTags.
bool exceeds_recommended_tags(const IntentCorpus& corpus);

IntentCorpus corpus_from_json(const nlohmann::json& j);
nlohmann::json corpus_to_json(const IntentCorpus& corpus);

/// Reads and validates a corpus file. Emits the >32 tag warning on stderr.
IntentCorpus load_corpus(const std::filesystem::path& path);

}  // namespace humanoid::intent
