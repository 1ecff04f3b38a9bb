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

#include "snrbench/linear_scorer.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"

namespace snrbench {
namespace {

using Json = nlohmann::ordered_json;

// log(1 + e^z) without overflow.
double Softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double Dot(std::span<const double> w, std::span<const double> x) {
  double z = w[x.size()];  // bias
  for (std::size_t i = 0; i < x.size(); ++i) z += w[i] * x[i];
  return z;
}

constexpr int kMaxHalvings = 40;

}  // namespace

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogisticObjective::LogisticObjective(std::vector<std::vector<double>> inputs,
                                     std::vector<int> labels,
                                     std::array<double, 2> class_weights)
    : inputs_(std::move(inputs)), labels_(std::move(labels)), class_weights_(class_weights) {
  if (inputs_.size() != labels_.size() || inputs_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "objective needs matching non-empty inputs and labels");
  }
  dims_ = inputs_.front().size();
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    if (inputs_[i].size() != dims_) {
      throw Error(ErrorCode::kDimMismatch, "example " + std::to_string(i) + " has " +
                                               std::to_string(inputs_[i].size()) +
                                               " features, expected " + std::to_string(dims_));
    }
    total_weight_ += class_weights_[labels_[i] ? 1 : 0];
  }
}

double LogisticObjective::Value(std::span<const double> w) const {
  double loss = 0.0;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const double z = Dot(w, inputs_[i]);
    loss += class_weights_[labels_[i] ? 1 : 0] * (Softplus(z) - (labels_[i] ? z : 0.0));
  }
  return loss / total_weight_;
}

std::vector<double> LogisticObjective::Gradient(std::span<const double> w) const {
  std::vector<double> g(dims_ + 1, 0.0);
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    const double z = Dot(w, inputs_[i]);
    const double r = class_weights_[labels_[i] ? 1 : 0] * (Sigmoid(z) - (labels_[i] ? 1.0 : 0.0));
    for (std::size_t d = 0; d < dims_; ++d) g[d] += r * inputs_[i][d];
    g[dims_] += r;
  }
  for (double& v : g) v /= total_weight_;
  return g;
}

LinearScorer::LinearScorer(std::vector<double> weights, std::vector<double> feature_mean,
                           std::vector<double> feature_std, TrainingMeta meta)
    : weights_(std::move(weights)),
      feature_mean_(std::move(feature_mean)),
      feature_std_(std::move(feature_std)),
      meta_(std::move(meta)) {
  if (weights_.size() != feature_mean_.size() + 1 || feature_std_.size() != feature_mean_.size()) {
    throw Error(ErrorCode::kDimMismatch, "scorer weights/normalizer sizes disagree");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) throw Error(ErrorCode::kInvalidArgument, "non-finite scorer weight");
  }
}

double LinearScorer::Logit(std::span<const double> features) const {
  if (features.size() != dims()) {
    throw Error(ErrorCode::kDimMismatch, "scorer expects " + std::to_string(dims()) +
                                             " features, got " + std::to_string(features.size()));
  }
  double z = weights_.back();
  for (std::size_t i = 0; i < features.size(); ++i) {
    z += weights_[i] * (features[i] - feature_mean_[i]) / feature_std_[i];
  }
  return z;
}

double LinearScorer::Score(std::span<const double> features) const { return Sigmoid(Logit(features)); }

LinearScorer TrainScorer(const std::vector<LabeledExample>& data, const TrainOptions& options) {
  std::size_t n_pos = 0;
  for (const auto& e : data) n_pos += e.label ? 1 : 0;
  if (data.empty() || n_pos == 0 || n_pos == data.size()) {
    throw Error(ErrorCode::kDegenerateLabels, "training data must contain both classes");
  }
  const std::size_t dims = data.front().features.size();
  const std::size_t n = data.size();

  std::vector<double> mean(dims, 0.0), stdev(dims, 0.0);
  for (const auto& e : data) {
    if (e.features.size() != dims) throw Error(ErrorCode::kDimMismatch, "ragged training features");
    for (std::size_t d = 0; d < dims; ++d) mean[d] += e.features[d];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (const auto& e : data) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double dev = e.features[d] - mean[d];
      stdev[d] += dev * dev;
    }
  }
  for (double& s : stdev) {
    s = std::sqrt(s / static_cast<double>(n));
    if (!(s > 1e-12)) s = 1.0;  // constant feature
  }

  std::vector<std::vector<double>> inputs(n, std::vector<double>(dims));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) inputs[i][d] = (data[i].features[d] - mean[d]) / stdev[d];
    labels[i] = data[i].label ? 1 : 0;
  }

  const std::size_t n_neg = n - n_pos;
  const std::array<double, 2> cw = options.class_weights.value_or(std::array<double, 2>{
      static_cast<double>(n) / (2.0 * n_neg), static_cast<double>(n) / (2.0 * n_pos)});
  const LogisticObjective objective(std::move(inputs), std::move(labels), cw);

  std::vector<double> w(dims + 1, 0.0);
  if (options.init_scale > 0.0) {
    KeyedStream rng(DeriveSeed(options.seed, "init"));
    for (double& v : w) v = options.init_scale * (2.0 * rng.NextUniform() - 1.0);
  }

  TrainingMeta meta;
  meta.epochs = options.epochs;
  meta.learning_rate = options.learning_rate;
  meta.class_weights = cw;
  meta.seed = options.seed;
  double loss = objective.Value(w);
  meta.loss_history.push_back(loss);

  std::vector<double> trial(w.size());
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const auto g = objective.Gradient(w);
    double step = options.learning_rate;
    for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
      for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] - step * g[i];
      const double trial_loss = objective.Value(trial);
      if (trial_loss <= loss) {
        w.swap(trial);
        loss = trial_loss;
        break;
      }
    }
    meta.loss_history.push_back(loss);
  }
  return LinearScorer(std::move(w), std::move(mean), std::move(stdev), std::move(meta));
}

void WriteScorers(const std::vector<LinearScorer>& scorers, const std::string& task,
                  const std::filesystem::path& path, const std::string& config_digest) {
  Json root;
  root["task"] = task;
  root["config_digest"] = config_digest;
  root["dims"] = scorers.empty() ? 0 : scorers.front().dims();
  Json list = Json::array();
  for (const auto& s : scorers) {
    Json j;
    j["weights"] = s.weights();
    j["feature_mean"] = s.feature_mean();
    j["feature_std"] = s.feature_std();
    Json meta;
    meta["epochs"] = s.meta().epochs;
    meta["learning_rate"] = s.meta().learning_rate;
    meta["class_weights"] = s.meta().class_weights;
    meta["seed"] = s.meta().seed;
    meta["final_loss"] = s.meta().loss_history.empty() ? 0.0 : s.meta().loss_history.back();
    j["meta"] = meta;
    list.push_back(j);
  }
  root["scorers"] = list;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << root.dump(1) << "\n";
}

std::vector<LinearScorer> ReadScorers(const std::filesystem::path& path, std::string* task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open model " + path.string());
  try {
    const Json root = Json::parse(in);
    if (task) *task = root.at("task").get<std::string>();
    const auto dims = root.at("dims").get<std::size_t>();
    std::vector<LinearScorer> out;
    for (const auto& j : root.at("scorers")) {
      TrainingMeta meta;
      meta.epochs = j.at("meta").at("epochs").get<int>();
      meta.learning_rate = j.at("meta").at("learning_rate").get<double>();
      meta.class_weights = j.at("meta").at("class_weights").get<std::array<double, 2>>();
      meta.seed = j.at("meta").at("seed").get<std::uint64_t>();
      meta.loss_history = {j.at("meta").at("final_loss").get<double>()};
      out.emplace_back(j.at("weights").get<std::vector<double>>(),
                       j.at("feature_mean").get<std::vector<double>>(),
                       j.at("feature_std").get<std::vector<double>>(), std::move(meta));
      if (out.back().dims() != dims) throw Error(ErrorCode::kDimMismatch, "model dims disagree");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, "model " + path.string() + ": " + e.what());
  }
}

}  // namespace snrbench
