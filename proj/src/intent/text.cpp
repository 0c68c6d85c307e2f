#include "humanoid/intent/text.hpp"

#include <algorithm>
#include <cctype>

#include "humanoid/error.hpp"
#include "humanoid/intent/corpus.hpp"

namespace humanoid::intent {

std::vector<std::string> normalize_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      // "don't" -> "dont": punctuation is removed, not treated as a separator.
      continue;
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  std::sort(tokens_.begin(), tokens_.end());
  tokens_.erase(std::unique(tokens_.begin(), tokens_.end()), tokens_.end());
}

std::ptrdiff_t Vocabulary::index_of(std::string_view token) const {
  auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end() || *it != token) return -1;
  return it - tokens_.begin();
}

Vocabulary build_vocabulary(const IntentCorpus& corpus) {
  std::vector<std::string> all;
  for (const auto& intent : corpus.intents) {
    for (const auto& pattern : intent.patterns) {
      auto tokens = normalize_text(pattern);
      all.insert(all.end(), std::make_move_iterator(tokens.begin()),
                 std::make_move_iterator(tokens.end()));
    }
  }
  if (all.empty()) {
    throw Error(Errc::EmptyCorpus, "no pattern produced a token after normalization");
  }
  return Vocabulary(std::move(all));
}

FeatureVector vectorize(std::span<const std::string> tokens, const Vocabulary& vocab) {
  FeatureVector features(vocab.size(), 0.0);
  for (const auto& token : tokens) {
    if (auto i = vocab.index_of(token); i >= 0) features[static_cast<std::size_t>(i)] = 1.0;
  }
  return features;
}

}  // namespace humanoid::intent
