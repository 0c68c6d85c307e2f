#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "humanoid/intent/corpus.hpp"
#include "humanoid/intent/model.hpp"

namespace humanoid::intent {

struct TrainingConfig {
  double learning_rate = 0.01;
  double decay = 1e-6;
  double momentum = 0.9;
  bool nesterov = true;
  double dropout_rate = 0.5;
  int epochs = 200;
  int batch_size = 5;
  std::uint64_t seed = 0;
  double threshold = kDefaultThreshold;

  SgdSettings sgd() const { return {learning_rate, decay, momentum, nesterov}; }
};

/// Throws PreconditionViolation for out-of-range settings.
void validate(const TrainingConfig& config);

struct EpochStats {
  int epoch = 0;
  /// Mean cross-entropy over all training pairs, inference mode, after the epoch.
  double loss = 0.0;
  /// Fraction of training patterns whose top prediction is their own tag.
  double accuracy = 0.0;

  friend bool operator==(const EpochStats&, const EpochStats&) = default;
};

struct TrainingResult {
  TrainedModel model;
  std::vector<EpochStats> history;
  std::vector<std::string> warnings;
};

/// Seeded mini-batch training. Equal (corpus, config) give bit-identical results.
TrainingResult train(const IntentCorpus& corpus, const TrainingConfig& config);

/// Inference-mode (loss, accuracy) of `model` over every corpus pattern.
EpochStats evaluate(const TrainedModel& model, const IntentCorpus& corpus);

}  // namespace humanoid::intent
