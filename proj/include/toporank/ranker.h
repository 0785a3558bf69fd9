// Copyright 2026 The Toporank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPORANK_RANKER_H_
#define TOPORANK_RANKER_H_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "toporank/features.h"

namespace toporank {

enum class ScoreMode : std::uint8_t {
  // Each slot gets a sigmoid score in [0, 1]; the scores are softmaxed.
  kSigmoidSoftmax = 0,
  // Softmax directly over the pre-sigmoid logits.
  kLogitSoftmax = 1,
};

struct RankerConfig {
  int epochs = 15;
  int batch_size = 60;
  double dropout = 0.3;
  double learning_rate = 0.4;
  int embedding_dim = 32;
  int hidden_dim = 64;
  int gradient_accumulation_steps = 1;
  double multitask_country_weight = 0.0;
  std::uint64_t seed = 0;
  ScoreMode score_mode = ScoreMode::kSigmoidSoftmax;
  bool use_population_feature = true;
  // Echo of the embedding provider the model was trained with.
  int context_dim = 64;
  std::uint64_t provider_seed = 0;

  void Validate() const;
};

struct ScoredCandidateSet {
  // Candidates first, null slot last.
  std::vector<double> probabilities;
  // Per-slot values fed to the softmax (sigmoid outputs or logits).
  std::vector<double> slot_scores;
  // Sigmoid outputs for the candidates only.
  std::vector<double> raw_scores;
  size_t predicted = 0;

  size_t null_slot() const { return probabilities.size() - 1; }
  bool abstained() const { return predicted == null_slot(); }
};

struct TrainingExample {
  std::vector<CandidateFeatures> features;
  ContextVectors context;
  // Index into features, or features.size() for the null slot.
  size_t gold_slot = 0;
  // Country of the gold entry; feeds the auxiliary country head.
  std::optional<std::string> gold_country;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> heldout_accuracy;
};

using TrainingHistory = std::vector<EpochStats>;

class RankerModel {
 public:
  // Number of similarity inputs: {country, class} x {mention, others, document}.
  static constexpr int kSimilarityCount = 6;
  static constexpr int kInputWidth = kSimilarityCount + CandidateFeatures::kNumericCount;

  RankerModel() = default;

  // Countries outside |country_vocab| (and the empty code) share a
  // reserved out-of-vocabulary row, as do unknown feature classes.
  static RankerModel Create(const RankerConfig& config,
                            std::vector<std::string> country_vocab);

  const RankerConfig& config() const { return config_; }
  RankerConfig& mutable_config() { return config_; }
  const std::vector<std::string>& country_vocab() const { return country_vocab_; }

  size_t CountryRow(std::string_view code) const;
  static size_t ClassRow(char feature_class);
  static constexpr size_t kClassRows = 10;

  const Eigen::VectorXd& parameters() const { return params_; }
  Eigen::VectorXd& mutable_parameters() { return params_; }

  // Scores a candidate list. Passing |dropout_rng| enables training mode.
  ScoredCandidateSet Score(std::span<const CandidateFeatures> features,
                           const ContextVectors& context,
                           std::mt19937_64* dropout_rng = nullptr) const;

  // Cross-entropy on the gold slot plus the weighted country head. When
  // |gradient| is non-null the analytic gradient is added into it.
  double Loss(const TrainingExample& example, Eigen::VectorXd* gradient,
              std::mt19937_64* dropout_rng = nullptr) const;

  void Save(const std::string& path) const;
  static RankerModel Load(const std::string& path);

  bool operator==(const RankerModel& other) const;

  struct Layout {
    Eigen::Index country_emb, class_emb, projection, w1, b1, w2, b2, null_bias,
        country_head_w, country_head_b, total;
  };
  const Layout& layout() const { return layout_; }

 private:
  struct Forward;

  void ComputeLayout();
  void Run(std::span<const CandidateFeatures> features, const ContextVectors& context,
           std::mt19937_64* dropout_rng, Forward& fwd) const;

  RankerConfig config_;
  std::vector<std::string> country_vocab_;
  Layout layout_{};
  Eigen::VectorXd params_;
};

ScoredCandidateSet ScoreCandidates(const RankerModel& model,
                                   std::span<const CandidateFeatures> features,
                                   const ContextVectors& context, bool training_mode,
                                   std::uint64_t dropout_seed = 0);

// Mini-batch SGD on the mean cross-entropy. Architecture fields of |config|
// must match the model; training fields replace the model's.
TrainingHistory Train(RankerModel& model, std::span<const TrainingExample> data,
                      const RankerConfig& config,
                      std::span<const TrainingExample> heldout = {});

// Largest relative error between analytic and central-difference gradients
// over every parameter, dropout disabled.
double GradientCheck(const RankerModel& model, const TrainingExample& example,
                     double epsilon = 1e-5);

double Accuracy(const RankerModel& model, std::span<const TrainingExample> data);

inline constexpr uint32_t kModelFormatVersion = 1;

}  // namespace toporank

#endif  // TOPORANK_RANKER_H_
