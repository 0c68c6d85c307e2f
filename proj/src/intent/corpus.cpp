#include "humanoid/intent/corpus.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include "humanoid/error.hpp"

namespace humanoid::intent {

std::vector<std::string> IntentCorpus::tags() const {
  std::vector<std::string> out;
  out.reserve(intents.size());
  for (const auto& intent : intents) out.push_back(intent.tag);
  return out;
}

std::ptrdiff_t IntentCorpus::tag_index(const std::string& tag) const {
  for (std::size_t i = 0; i < intents.size(); ++i) {
    if (intents[i].tag == tag) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

void validate(const IntentCorpus& corpus) {
  if (corpus.intents.size() < 2) {
    throw Error(Errc::InvalidCorpus, "a corpus needs at least 2 intents");
  }
  std::set<std::string> seen;
  for (const auto& intent : corpus.intents) {
    if (intent.tag.empty()) throw Error(Errc::InvalidCorpus, "intent with empty tag");
    if (!seen.insert(intent.tag).second) {
      throw Error(Errc::InvalidCorpus, "duplicate tag '" + intent.tag + "'");
    }
    if (intent.patterns.empty()) {
      throw Error(Errc::InvalidCorpus, "intent '" + intent.tag + "' has no patterns");
    }
    if (intent.responses.empty()) {
      throw Error(Errc::InvalidCorpus, "intent '" + intent.tag + "' has no responses");
    }
  }
}

bool exceeds_recommended_tags(const IntentCorpus& corpus) {
  return corpus.intents.size() > kRecommendedMaxTags;
}

IntentCorpus corpus_from_json(const nlohmann::json& j) {
  IntentCorpus corpus;
  try {
    corpus.version = j.value("version", 1);
    for (const auto& item : j.at("intents")) {
      Intent intent;
      intent.tag = item.at("tag").get<std::string>();
      intent.patterns = item.at("patterns").get<std::vector<std::string>>();
      intent.responses = item.at("responses").get<std::vector<std::string>>();
      if (auto it = item.find("context"); it != item.end() && !it->is_null()) {
        intent.context = it->is_string() ? it->get<std::string>() : it->dump();
      }
      corpus.intents.push_back(std::move(intent));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidCorpus, e.what());
  }
  return corpus;
}

nlohmann::json corpus_to_json(const IntentCorpus& corpus) {
  nlohmann::json intents = nlohmann::json::array();
  for (const auto& intent : corpus.intents) {
    nlohmann::json item{{"tag", intent.tag},
                        {"patterns", intent.patterns},
                        {"responses", intent.responses}};
    item["context"] = intent.context ? nlohmann::json(*intent.context) : nlohmann::json();
    intents.push_back(std::move(item));
  }
  return {{"version", corpus.version}, {"intents", std::move(intents)}};
}

IntentCorpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open corpus " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidCorpus, path.string() + ": " + e.what());
  }
  auto corpus = corpus_from_json(j);
  validate(corpus);
  if (exceeds_recommended_tags(corpus)) {
    std::cerr << "warning: corpus " << path.string() << " has " << corpus.intents.size()
              << " tags; more than " << kRecommendedMaxTags << " is not recommended\n";
  }
  return corpus;
}

}  // namespace humanoid::intent
