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

#include "snrbench/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "snrbench/error.h"

namespace snrbench {
namespace {

struct ClassTotals {
  std::size_t pos = 0;
  std::size_t neg = 0;
};

ClassTotals CountClasses(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and truth differ in length");
  }
  ClassTotals t;
  for (int y : truth) (y ? t.pos : t.neg)++;
  if (t.pos == 0 || t.neg == 0) {
    throw Error(ErrorCode::kSingleClass,
                "need both classes, got " + std::to_string(t.pos) + " positive and " +
                    std::to_string(t.neg) + " negative trials");
  }
  return t;
}

std::vector<std::size_t> SortedOrder(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  return order;
}

}  // namespace

double RocAuc(std::span<const double> scores, std::span<const int> truth) {
  const ClassTotals totals = CountClasses(scores, truth);
  const auto order = SortedOrder(scores);
  // Twice the Mann-Whitney U statistic, kept in integers so the result is
  // exact up to the final division.
  unsigned long long twice_u = 0;
  std::size_t neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    std::size_t pos_here = 0, neg_here = 0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (truth[order[j]] ? pos_here : neg_here)++;
      ++j;
    }
    twice_u += 2ull * pos_here * neg_below + 1ull * pos_here * neg_here;
    neg_below += neg_here;
    i = j;
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(totals.pos) * static_cast<double>(totals.neg));
}

EerResult ComputeEer(std::span<const double> scores, std::span<const int> truth) {
  const ClassTotals totals = CountClasses(scores, truth);
  const auto order = SortedOrder(scores);
  const double n_pos = static_cast<double>(totals.pos);
  const double n_neg = static_cast<double>(totals.neg);

  EerResult r;
  std::size_t pos_below = 0, neg_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double t = scores[order[i]];
    r.sweep.push_back({t, static_cast<double>(totals.neg - neg_below) / n_neg,
                       static_cast<double>(pos_below) / n_pos});
    while (i < order.size() && scores[order[i]] == t) {
      (truth[order[i]] ? pos_below : neg_below)++;
      ++i;
    }
  }
  r.sweep.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});

  // The first point always has FAR = 1 > FRR = 0 and the last FAR = 0 < 1.
  std::size_t k = 1;
  while (r.sweep[k].far - r.sweep[k].frr > 0.0) ++k;
  const DetPoint& hi = r.sweep[k];
  if (hi.far == hi.frr) {
    r.eer = hi.far;
    r.threshold = hi.threshold;
    r.bracket_lo = r.bracket_hi = k;
    return r;
  }
  const DetPoint& lo = r.sweep[k - 1];
  const double d_lo = lo.far - lo.frr;
  const double d_hi = hi.far - hi.frr;
  const double alpha = d_lo / (d_lo - d_hi);
  r.eer = lo.far + alpha * (hi.far - lo.far);
  r.threshold = std::isinf(hi.threshold) ? lo.threshold
                                         : lo.threshold + alpha * (hi.threshold - lo.threshold);
  r.bracket_lo = k - 1;
  r.bracket_hi = k;
  return r;
}

double BinaryAccuracy(std::span<const double> scores, std::span<const int> truth,
                      double threshold) {
  if (scores.size() != truth.size() || scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "accuracy needs matching non-empty inputs");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted_pos = scores[i] >= threshold;
    correct += predicted_pos == (truth[i] != 0) ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

ConfusionMatrix BinaryConfusion(std::span<const double> scores, std::span<const int> truth,
                                double threshold) {
  if (scores.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and truth differ in length");
  }
  ConfusionMatrix m(2, std::vector<std::size_t>(2, 0));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    m[truth[i] ? 1 : 0][scores[i] >= threshold ? 1 : 0]++;
  }
  return m;
}

int ArgmaxClass(std::span<const double> class_scores) {
  int best = 0;
  for (std::size_t c = 1; c < class_scores.size(); ++c) {
    if (class_scores[c] > class_scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  }
  return best;
}

ConfusionMatrix MulticlassConfusion(const std::vector<std::vector<double>>& class_scores,
                                    std::span<const int> truth, int n_classes) {
  if (class_scores.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and truth differ in length");
  }
  const auto n = static_cast<std::size_t>(n_classes);
  ConfusionMatrix m(n, std::vector<std::size_t>(n, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (class_scores[i].size() != n) {
      throw Error(ErrorCode::kDimMismatch, "row " + std::to_string(i) + " has " +
                                               std::to_string(class_scores[i].size()) +
                                               " class scores, expected " + std::to_string(n));
    }
    if (truth[i] < 0 || truth[i] >= n_classes) {
      throw Error(ErrorCode::kInvalidArgument, "truth label out of range");
    }
    m[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(ArgmaxClass(class_scores[i]))]++;
  }
  return m;
}

double AccuracyFromConfusion(const ConfusionMatrix& m) {
  std::size_t total = 0, diag = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) total += m[i][j];
    diag += m[i][i];
  }
  return total == 0 ? 0.0 : static_cast<double>(diag) / static_cast<double>(total);
}

MacroF1Result MacroF1(const ConfusionMatrix& m) {
  MacroF1Result r;
  const std::size_t n = m.size();
  double sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t tp = m[c][c], fn = 0, fp = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != c) {
        fn += m[c][j];
        fp += m[j][c];
      }
    }
    if (tp + fn == 0) r.absent_classes.push_back(static_cast<int>(c));
    const double denom = 2.0 * tp + fp + fn;
    const double f1 = denom == 0.0 ? 0.0 : 2.0 * tp / denom;
    r.per_class_f1.push_back(f1);
    sum += f1;
  }
  r.macro_f1 = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return r;
}

}  // namespace snrbench
