// SPDX-License-Identifier: Apache-2.0
#pragma once

// Multi-label classifier: one hidden layer with rectifier activation and an
// independent sigmoid output per label, trained by mini-batch gradient
// descent on summed binary cross-entropy with early stopping on validation
// example-based F1. The hidden size is chosen by grid search.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ortho/features.hpp"

namespace ortho {

// Weight layout note: w1 is stored input-major (input_dim rows of
// hidden_dim) so that a sparse binary input touches contiguous rows; the
// model file records the conventional hidden_dim x input_dim matrix.
struct MlpModel {
  std::uint32_t input_dim = 0;
  std::uint32_t hidden_dim = 0;
  std::uint32_t n_labels = 0;
  std::string hidden_activation = "relu";
  std::vector<std::string> labels;  // output position -> class_id
  std::unordered_map<std::string, std::uint32_t> label_index;
  std::vector<double> w1;  // [input_dim][hidden_dim]
  std::vector<double> b1;  // hidden_dim
  std::vector<double> w2;  // [n_labels][hidden_dim]
  std::vector<double> b2;  // n_labels

  double* w1_row(std::uint32_t input) { return w1.data() + std::size_t(input) * hidden_dim; }
  const double* w1_row(std::uint32_t input) const { return w1.data() + std::size_t(input) * hidden_dim; }
  double* w2_row(std::uint32_t label) { return w2.data() + std::size_t(label) * hidden_dim; }
  const double* w2_row(std::uint32_t label) const { return w2.data() + std::size_t(label) * hidden_dim; }

  void validate() const;  // dims, finiteness, label bijection
};

struct Gradients {
  std::vector<double> w1, b1, w2, b2;  // same shapes as the model
};

struct TrainConfig {
  std::vector<std::uint32_t> hidden_grid = {256, 512, 1024, 2048, 4096};
  double learning_rate = 0.1;
  std::uint32_t batch_size = 32;
  std::uint32_t max_epochs = 200;
  std::uint32_t patience = 10;  // epochs without validation improvement
  double decision_threshold = 0.5;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct LabeledExample {
  FeatureVector x;
  std::vector<std::uint8_t> targets;  // one 0/1 per label position
};

struct ClassifierGridEntry {
  std::uint32_t hidden_dim = 0;
  std::uint32_t epochs_run = 0;
  double val_precision = 0.0;
  double val_recall = 0.0;
  double val_f1 = 0.0;
  std::string status = "ok";  // or "diverged"
};

struct ClassifierTrainResult {
  MlpModel model;
  std::vector<ClassifierGridEntry> grid;
  std::size_t selected_index = 0;
};

// Glorot-uniform weights, zero biases, deterministic per seed.
MlpModel init_mlp(std::uint32_t input_dim, std::uint32_t hidden_dim,
                  const std::vector<std::string>& labels, std::uint64_t seed);

// Per-label sigmoid probabilities, each strictly inside (0,1).
std::vector<double> forward(const MlpModel& model, const FeatureVector& x);

// Summed binary cross-entropy with probabilities clamped at 1e-12.
double loss(const MlpModel& model, const FeatureVector& x,
            const std::vector<std::uint8_t>& y);

// Mean-batch loss gradients for every weight and bias.
Gradients gradients(const MlpModel& model,
                    const std::vector<LabeledExample>& batch);

// Trains one model per grid size and keeps the best validation F1. A grid
// point whose loss or weights turn non-finite is recorded as "diverged"
// and skipped; if every point diverges a NumericError is thrown.
ClassifierTrainResult train(const std::vector<LabeledExample>& train_set,
                            const std::vector<LabeledExample>& val_set,
                            const std::vector<std::string>& labels,
                            const TrainConfig& cfg);

// Labels whose probability is >= threshold (inclusive).
std::set<std::string> predict_labels(const MlpModel& model,
                                     const FeatureVector& x, double threshold);

// Versioned model file with free-form metadata lines (feature kind,
// tokenizer, and similar provenance recorded by the CLI).
void save_mlp(const MlpModel& model,
              const std::map<std::string, std::string>& meta,
              const std::string& path);

struct LoadedMlp {
  MlpModel model;
  std::map<std::string, std::string> meta;
};

LoadedMlp load_mlp(const std::string& path);

}  // namespace ortho
