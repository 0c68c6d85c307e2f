#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "humanoid/intent/corpus.hpp"
#include "humanoid/intent/network.hpp"
#include "humanoid/intent/text.hpp"

namespace humanoid::intent {

inline constexpr double kDefaultThreshold = 0.25;
inline constexpr int kModelFormatVersion = 1;

/// A trained classifier. Immutable once built; safe to share between readers.
struct TrainedModel {
  Vocabulary vocab;
  std::vector<std::string> tags;
  NetworkParameters params;
  double threshold = kDefaultThreshold;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

struct PredictionResult {
  /// (tag, confidence), highest confidence first.
  std::vector<std::pair<std::string, double>> ranked;
  bool matched = false;

  const std::string& top_tag() const { return ranked.front().first; }
  double top_confidence() const { return ranked.front().second; }
};

/// Inference-mode prediction. `threshold` overrides the model's own.
PredictionResult predict(const TrainedModel& model, std::string_view text,
                         std::optional<double> threshold = std::nullopt);

struct GrowthEntry {
  std::string utterance;
  std::optional<std::string> tag;  // best guess, even though it missed the threshold
  double confidence = 0.0;
  double timestamp = 0.0;          // session seconds

  friend bool operator==(const GrowthEntry&, const GrowthEntry&) = default;
};

/// Utterances the chatbot could not place, kept for offline curation of the
/// corpus. Append-only; callers serialize access.
class GrowthLog {
 public:
  void append(GrowthEntry entry) { entries_.push_back(std::move(entry)); }
  const std::vector<GrowthEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// One JSON object per line.
  void write_jsonl(const std::filesystem::path& path) const;
  static GrowthLog read_jsonl(const std::filesystem::path& path);

 private:
  std::vector<GrowthEntry> entries_;
};

inline constexpr std::string_view kFallbackReply =
    "I'm not sure I understood that. Could you say it another way?";

struct Reply {
  std::string text;
  std::optional<std::string> tag;  // empty when the fallback was used
  double confidence = 0.0;
};

/// Picks a response for `text`. A matched tag yields one of its responses
/// chosen uniformly with `rng`; otherwise the fallback reply is returned and
/// the utterance is appended to `growth`. Throws TagSetMismatch when the
/// model was not trained on this corpus's tag set.
Reply respond(const TrainedModel& model, const IntentCorpus& corpus, std::string_view text,
              std::mt19937_64& rng, GrowthLog& growth, double timestamp = 0.0);

nlohmann::json model_to_json(const TrainedModel& model);
/// Throws FormatVersionMismatch or CorruptFile.
TrainedModel model_from_json(const nlohmann::json& j);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace humanoid::intent
