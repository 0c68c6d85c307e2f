#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace humanoid::intent {

struct IntentCorpus;

/// Lowercases, drops ASCII punctuation and splits on whitespace. No stemming.
std::vector<std::string> normalize_text(std::string_view text);

/// Sorted, duplicate-free token list. Index i is feature i of a bag-of-words.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Takes any token list; sorts and deduplicates it.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  /// Feature index of a token, or -1 when out of vocabulary.
  std::ptrdiff_t index_of(std::string_view token) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> tokens_;
};

/// Throws Errc::EmptyCorpus when no pattern yields a token.
Vocabulary build_vocabulary(const IntentCorpus& corpus);

/// Binary presence vector (0.0 / 1.0) of length vocab.size().
using FeatureVector = std::vector<double>;

FeatureVector vectorize(std::span<const std::string> tokens, const Vocabulary& vocab);

}  // namespace humanoid::intent
