#include "humanoid/intent/model.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "humanoid/error.hpp"

namespace humanoid::intent {

PredictionResult predict(const TrainedModel& model, std::string_view text,
                         std::optional<double> threshold) {
  const auto features = vectorize(normalize_text(text), model.vocab);
  const auto probs = infer(model.params, features);

  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

  PredictionResult result;
  result.ranked.reserve(order.size());
  for (auto i : order) result.ranked.emplace_back(model.tags[i], probs[i]);
  result.matched = result.top_confidence() >= threshold.value_or(model.threshold);
  return result;
}

Reply respond(const TrainedModel& model, const IntentCorpus& corpus, std::string_view text,
              std::mt19937_64& rng, GrowthLog& growth, double timestamp) {
  if (model.tags != corpus.tags()) {
    throw Error(Errc::TagSetMismatch, "model has " + std::to_string(model.tags.size()) +
                                          " tags, corpus has " +
                                          std::to_string(corpus.intents.size()));
  }
  const auto prediction = predict(model, text);
  if (!prediction.matched) {
    growth.append({std::string(text), prediction.top_tag(), prediction.top_confidence(), timestamp});
    return {std::string(kFallbackReply), std::nullopt, prediction.top_confidence()};
  }
  const auto& intent = corpus.intents[static_cast<std::size_t>(corpus.tag_index(prediction.top_tag()))];
  std::uniform_int_distribution<std::size_t> pick(0, intent.responses.size() - 1);
  return {intent.responses[pick(rng)], intent.tag, prediction.top_confidence()};
}

void GrowthLog::write_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write growth log " + path.string());
  for (const auto& e : entries_) {
    nlohmann::json j{{"utterance", e.utterance},
                     {"tag", e.tag ? nlohmann::json(*e.tag) : nlohmann::json()},
                     {"confidence", e.confidence},
                     {"timestamp", e.timestamp}};
    out << j.dump() << '\n';
  }
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

GrowthLog GrowthLog::read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open growth log " + path.string());
  GrowthLog log;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      GrowthEntry e;
      e.utterance = j.at("utterance").get<std::string>();
      if (!j.at("tag").is_null()) e.tag = j.at("tag").get<std::string>();
      e.confidence = j.at("confidence").get<double>();
      e.timestamp = j.at("timestamp").get<double>();
      log.append(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(Errc::CorruptFile, path.string() + ": " + ex.what());
    }
  }
  return log;
}

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.params.layers) {
    layers.push_back({{"in", layer.fan_in()},
                      {"out", layer.fan_out()},
                      {"w", layer.weights.data},
                      {"b", layer.bias}});
  }
  return {{"format_version", kModelFormatVersion},
          {"vocab", model.vocab.tokens()},
          {"tags", model.tags},
          {"threshold", model.threshold},
          {"layers", std::move(layers)}};
}

TrainedModel model_from_json(const nlohmann::json& j) {
  auto corrupt = [](const std::string& what) { throw Error(Errc::CorruptFile, what); };
  TrainedModel model;
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw Error(Errc::FormatVersionMismatch,
                  "model format_version " + std::to_string(version) + ", expected " +
                      std::to_string(kModelFormatVersion));
    }
    auto tokens = j.at("vocab").get<std::vector<std::string>>();
    if (!std::is_sorted(tokens.begin(), tokens.end()) ||
        std::adjacent_find(tokens.begin(), tokens.end()) != tokens.end()) {
      corrupt("vocabulary is not strictly sorted");
    }
    model.vocab = Vocabulary(std::move(tokens));
    model.tags = j.at("tags").get<std::vector<std::string>>();
    model.threshold = j.at("threshold").get<double>();

    const auto& layers = j.at("layers");
    if (!layers.is_array() || layers.size() != 3) corrupt("expected 3 layers");
    const std::array<std::size_t, 4> widths{model.vocab.size(), kHidden1, kHidden2,
                                            model.tags.size()};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& lj = layers[k];
      const auto in = lj.at("in").get<std::size_t>();
      const auto out = lj.at("out").get<std::size_t>();
      if (in != widths[k] || out != widths[k + 1]) {
        corrupt("layer " + std::to_string(k) + " has shape " + std::to_string(in) + "x" +
                std::to_string(out));
      }
      DenseLayer layer{Matrix(in, out), lj.at("b").get<std::vector<double>>()};
      layer.weights.data = lj.at("w").get<std::vector<double>>();
      if (layer.weights.data.size() != in * out || layer.bias.size() != out) {
        corrupt("layer " + std::to_string(k) + " has the wrong number of values");
      }
      model.params.layers[k] = std::move(layer);
    }
  } catch (const nlohmann::json::exception& e) {
    corrupt(e.what());
  }
  if (model.tags.size() < 2 || model.vocab.empty()) corrupt("model needs a vocabulary and >= 2 tags");
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoFailure, "cannot write model " + path.string());
  out << model_to_json(model).dump() << '\n';
  if (!out) throw Error(Errc::IoFailure, "write failed for " + path.string());
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open model " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace humanoid::intent
