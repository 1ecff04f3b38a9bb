// Copyright 2026  The snrbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SNRBENCH_LINEAR_SCORER_H_
#define SNRBENCH_LINEAR_SCORER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace snrbench {

struct LabeledExample {
  std::vector<double> features;
  int label = 0;  // 1 = positive (bonafide), 0 = negative
};

struct TrainOptions {
  int epochs = 200;
  double learning_rate = 0.5;
  // {negative, positive}; unset means balanced weights N / (2 * N_class).
  std::optional<std::array<double, 2>> class_weights;
  std::uint64_t seed = 0;
  // Half-width of the uniform random initial weights; 0 starts from zero.
  double init_scale = 0.0;
};

struct TrainingMeta {
  int epochs = 0;
  double learning_rate = 0.0;
  std::array<double, 2> class_weights{1.0, 1.0};
  std::uint64_t seed = 0;
  std::vector<double> loss_history;  // loss before training, then per epoch
};

/// Class-weighted mean logistic loss over standardized inputs. Weight
/// vectors hold one entry per feature followed by the bias.
class LogisticObjective {
 public:
  LogisticObjective(std::vector<std::vector<double>> inputs, std::vector<int> labels,
                    std::array<double, 2> class_weights);

  std::size_t dims() const { return dims_; }
  double Value(std::span<const double> w) const;
  std::vector<double> Gradient(std::span<const double> w) const;

 private:
  std::vector<std::vector<double>> inputs_;
  std::vector<int> labels_;
  std::array<double, 2> class_weights_;
  double total_weight_ = 0.0;
  std::size_t dims_ = 0;
};

/// Logistic regression on utterance summary vectors. Inputs are
/// standardized with the training mean/std before the affine map.
class LinearScorer {
 public:
  LinearScorer() = default;
  LinearScorer(std::vector<double> weights, std::vector<double> feature_mean,
               std::vector<double> feature_std, TrainingMeta meta);

  std::size_t dims() const { return feature_mean_.size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& feature_mean() const { return feature_mean_; }
  const std::vector<double>& feature_std() const { return feature_std_; }
  const TrainingMeta& meta() const { return meta_; }

  /// Affine score before the sigmoid. Throws DimMismatch.
  double Logit(std::span<const double> features) const;
  /// Sigmoid of Logit, in (0, 1); higher means more likely positive.
  double Score(std::span<const double> features) const;

 private:
  std::vector<double> weights_;  // dims + 1, bias last
  std::vector<double> feature_mean_;
  std::vector<double> feature_std_;
  TrainingMeta meta_;
};

/// Full-batch gradient descent from zero (or a seeded random start). A step
/// that would raise the training loss is halved until it does not, so the
/// recorded loss never increases. Throws DegenerateLabels unless both
/// classes are present.
LinearScorer TrainScorer(const std::vector<LabeledExample>& data, const TrainOptions& options);

double Sigmoid(double z);

/// Model file: {"task", "dims", "scorers": [{weights, feature_mean,
/// feature_std, meta}]}; binary tasks have one scorer, four-class has four
/// one-vs-rest scorers.
void WriteScorers(const std::vector<LinearScorer>& scorers, const std::string& task,
                  const std::filesystem::path& path, const std::string& config_digest = "");
std::vector<LinearScorer> ReadScorers(const std::filesystem::path& path, std::string* task);

}  // namespace snrbench

#endif  // SNRBENCH_LINEAR_SCORER_H_
