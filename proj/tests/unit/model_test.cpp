#include <doctest.h>

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "humanoid/intent/trainer.hpp"
#include "test_util.hpp"

using namespace humanoid;
using namespace humanoid::intent;

namespace {

struct Trained {
  IntentCorpus corpus;
  TrainedModel model;
};

const Trained& desk_model() {
  static const Trained trained = [] {
    Trained t{load_corpus(test_util::data_file("intents.json")), {}};
    TrainingConfig config;
    config.seed = 3;
    t.model = train(t.corpus, config).model;
    return t;
  }();
  return trained;
}

}  // namespace

TEST_CASE("predict ranks tags by confidence") {
  const auto& [corpus, model] = desk_model();
  const auto result = predict(model, "Hello robot");
  CHECK(result.top_tag() == "greeting");
  CHECK(result.matched);
  double sum = 0.0;
  for (std::size_t i = 0; i < result.ranked.size(); ++i) {
    sum += result.ranked[i].second;
    if (i > 0) CHECK(result.ranked[i - 1].second >= result.ranked[i].second);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.ranked.size() == corpus.intents.size());
}

TEST_CASE("empty and out-of-vocabulary text behave identically") {
  const auto& model = desk_model().model;
  const auto empty = predict(model, "");
  const auto gibberish = predict(model, "zxq blorf wibble");
  CHECK(empty.ranked == gibberish.ranked);
  double sum = 0.0;
  for (const auto& [tag, p] : empty.ranked) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-9);
}

TEST_CASE("threshold controls matched") {
  const auto& model = desk_model().model;
  CHECK_FALSE(predict(model, "Hello robot", 1.01).matched);
  CHECK(predict(model, "zxq", 0.0).matched);
}

TEST_CASE("respond") {
  const auto& [corpus, model] = desk_model();
  GrowthLog growth;

  SUBCASE("single-response tag always gives that response") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 5; ++i) {
      const auto reply = respond(model, corpus, "List your commands", rng, growth);
      CHECK(reply.tag == std::optional<std::string>("commands_help"));
      CHECK(reply.text == corpus.intents[8].responses[0]);
    }
    CHECK(growth.size() == 0);
  }
  SUBCASE("unmatched utterance falls back and grows the log") {
    auto strict = model;
    strict.threshold = 1.01;
    std::mt19937_64 rng(1);
    const auto reply = respond(strict, corpus, "the moon is made of cheese", rng, growth, 4.5);
    CHECK(reply.text == kFallbackReply);
    CHECK_FALSE(reply.tag.has_value());
    REQUIRE(growth.size() == 1);
    CHECK(growth.entries()[0].utterance == "the moon is made of cheese");
    CHECK(growth.entries()[0].timestamp == 4.5);
    CHECK(growth.entries()[0].tag.has_value());
  }
  SUBCASE("seeded choice sequence is reproducible") {
    auto sequence = [&](std::uint64_t seed) {
      std::mt19937_64 rng(seed);
      std::vector<std::string> out;
      for (int i = 0; i < 12; ++i) out.push_back(respond(model, corpus, "Hello", rng, growth).text);
      return out;
    };
    const auto a = sequence(42);
    CHECK(a == sequence(42));
    CHECK(std::set<std::string>(a.begin(), a.end()).size() > 1);
  }
  SUBCASE("tag set mismatch") {
    auto smaller = corpus;
    smaller.intents.pop_back();
    std::mt19937_64 rng(1);
    test_util::check_errc([&] { respond(model, smaller, "hi", rng, growth); }, Errc::TagSetMismatch);
  }
}

TEST_CASE("growth log jsonl round trip") {
  test_util::TempDir dir;
  GrowthLog log;
  log.append({"what", std::string("joke"), 0.125, 1.5});
  log.append({"huh", std::nullopt, 0.0, 2.0});
  log.write_jsonl(dir / "growth.jsonl");
  CHECK(GrowthLog::read_jsonl(dir / "growth.jsonl").entries() == log.entries());
}

TEST_CASE("model file round trip is bit exact") {
  const auto& model = desk_model().model;
  test_util::TempDir dir;
  save_model(model, dir / "model.json");
  const auto loaded = load_model(dir / "model.json");
  CHECK(loaded == model);

  std::mt19937_64 rng(77);
  std::bernoulli_distribution bit(0.05);
  for (int i = 0; i < 100; ++i) {
    std::string text;
    for (const auto& token : model.vocab.tokens()) {
      if (bit(rng)) text += token + " ";
    }
    CHECK(predict(loaded, text).ranked == predict(model, text).ranked);
  }
}

TEST_CASE("corrupt or foreign model files are rejected") {
  const auto& model = desk_model().model;
  test_util::TempDir dir;
  const auto text = model_to_json(model).dump();

  std::ofstream(dir / "truncated.json") << text.substr(0, text.size() / 2);
  test_util::check_errc([&] { load_model(dir / "truncated.json"); }, Errc::CorruptFile);

  auto bumped = model_to_json(model);
  bumped["format_version"] = kModelFormatVersion + 1;
  std::ofstream(dir / "bumped.json") << bumped.dump();
  test_util::check_errc([&] { load_model(dir / "bumped.json"); }, Errc::FormatVersionMismatch);

  auto short_layer = model_to_json(model);
  short_layer["layers"][1]["w"].erase(0);
  std::ofstream(dir / "short.json") << short_layer.dump();
  test_util::check_errc([&] { load_model(dir / "short.json"); }, Errc::CorruptFile);

  test_util::check_errc([&] { load_model(dir / "missing.json"); }, Errc::IoFailure);
}
