#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "denseval/corpus.hpp"

namespace denseval {

// Bag of unigrams and adjacent-word bigrams over whitespace tokens. Indices
// are dense, assigned in order of first appearance across the training texts
// (per text: unigrams first, then bigrams).
struct Vocabulary {
  std::vector<std::string> terms;
  std::map<std::string, std::size_t> index;

  std::size_t size() const { return terms.size(); }
};

Vocabulary build_vocabulary(const std::vector<std::string>& texts);

// Sparse term counts sorted by vocabulary index; out-of-vocabulary terms
// are dropped.
std::vector<std::pair<std::size_t, double>> featurize(const std::string& text,
                                                      const Vocabulary& vocab);

struct LogisticModel {
  Vocabulary vocab;
  std::vector<double> weights;
  double bias = 0.0;
};

struct TrainOptions {
  double learning_rate = 1e-4;
  int epochs = 2;
  int steps_per_epoch = 1;
  std::uint64_t seed = 0;  // reserved; weights start at zero
};

struct TrainResult {
  LogisticModel model;
  // loss at initialization, then after every gradient step
  std::vector<double> loss_history;
};

// Full-batch gradient descent on mean logistic loss from zero weights.
// Throws ValidationError when the data is empty or single-class.
TrainResult train(const std::vector<LabeledSummary>& data,
                  const TrainOptions& options = {});

struct Prediction {
  int label = 0;
  double probability = 0.0;  // P(label == 1)
};

Prediction predict(const LogisticModel& model, const std::string& text);

struct ClassifierStats {
  double accuracy = 0.0;
  int true_positives = 0;
  int false_positives = 0;
  int true_negatives = 0;
  int false_negatives = 0;
};

ClassifierStats evaluate(const LogisticModel& model,
                         const std::vector<LabeledSummary>& data);

// Text format, version-checked on load:
//   denseval-lm v1 V=<vocab size>
//   bias\t<value>
//   <term>\t<index>\t<weight>   (V lines)
void save_model(const LogisticModel& model, const std::filesystem::path& path);
LogisticModel load_model(const std::filesystem::path& path);

}  // namespace denseval
