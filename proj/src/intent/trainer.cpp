#include "humanoid/intent/trainer.hpp"

#include <algorithm>
#include <numeric>

#include "humanoid/error.hpp"

namespace humanoid::intent {
namespace {

struct Sample {
  FeatureVector features;
  std::size_t target;
};

std::vector<Sample> make_samples(const IntentCorpus& corpus, const Vocabulary& vocab) {
  std::vector<Sample> samples;
  for (std::size_t t = 0; t < corpus.intents.size(); ++t) {
    for (const auto& pattern : corpus.intents[t].patterns) {
      samples.push_back({vectorize(normalize_text(pattern), vocab), t});
    }
  }
  return samples;
}

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

EpochStats evaluate_samples(const NetworkParameters& params, const std::vector<Sample>& samples) {
  EpochStats stats;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    const auto p = infer(params, s.features);
    stats.loss += cross_entropy(p, s.target);
    if (argmax(p) == s.target) ++correct;
  }
  stats.loss /= static_cast<double>(samples.size());
  stats.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
  return stats;
}

void scale(Gradients& g, double factor) {
  g.for_each_tensor([factor](std::span<double> t) {
    for (auto& v : t) v *= factor;
  });
}

void zero(Gradients& g) {
  g.for_each_tensor([](std::span<double> t) { std::fill(t.begin(), t.end(), 0.0); });
}

}  // namespace

void validate(const TrainingConfig& c) {
  auto fail = [](const std::string& what) { throw Error(Errc::PreconditionViolation, what); };
  if (!(c.learning_rate > 0.0)) fail("learning_rate must be > 0");
  if (!(c.momentum >= 0.0 && c.momentum < 1.0)) fail("momentum must be in [0, 1)");
  if (!(c.dropout_rate >= 0.0 && c.dropout_rate < 1.0)) fail("dropout_rate must be in [0, 1)");
  if (c.decay < 0.0) fail("decay must be >= 0");
  if (c.epochs < 1) fail("epochs must be positive");
  if (c.batch_size < 1) fail("batch_size must be positive");
  if (!(c.threshold >= 0.0 && c.threshold <= 1.0)) fail("threshold must be in [0, 1]");
}

TrainingResult train(const IntentCorpus& corpus, const TrainingConfig& config) {
  validate(corpus);
  validate(config);

  TrainingResult result;
  if (exceeds_recommended_tags(corpus)) {
    result.warnings.push_back("corpus has " + std::to_string(corpus.intents.size()) +
                              " tags; more than " + std::to_string(kRecommendedMaxTags) +
                              " exceeds half the second hidden layer");
  }

  auto& model = result.model;
  model.vocab = build_vocabulary(corpus);
  model.tags = corpus.tags();
  model.threshold = config.threshold;
  model.params = init_network(model.vocab.size(), model.tags.size(), config.seed);

  const auto samples = make_samples(corpus, model.vocab);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32), 0x74726169u};
  std::mt19937_64 rng(seq);

  auto velocity = model.params.zeros_like();
  auto grads = model.params.zeros_like();
  const auto sgd = config.sgd();
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::uint64_t step = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(start + batch, order.size());
      zero(grads);
      for (std::size_t k = start; k < end; ++k) {
        const auto& s = samples[order[k]];
        auto fw = forward(model.params, s.features, Mode::Train, rng, config.dropout_rate);
        accumulate_gradients(model.params, fw.cache, s.target, grads);
      }
      scale(grads, 1.0 / static_cast<double>(end - start));
      sgd_step(model.params, velocity, grads, sgd, step++);
    }
    auto stats = evaluate_samples(model.params, samples);
    stats.epoch = epoch;
    result.history.push_back(stats);
  }
  return result;
}

EpochStats evaluate(const TrainedModel& model, const IntentCorpus& corpus) {
  return evaluate_samples(model.params, make_samples(corpus, model.vocab));
}

}  // namespace humanoid::intent
