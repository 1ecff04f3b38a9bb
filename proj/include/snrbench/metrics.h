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

#ifndef SNRBENCH_METRICS_H_
#define SNRBENCH_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace snrbench {

// Binary metrics take parallel arrays of scores and truth labels, truth 1
// for the positive class (bonafide) and 0 for the negative class (spoof).
// Higher scores mean "more positive".

/// Mann-Whitney estimate of P(score_pos > score_neg), ties counting 1/2.
/// Throws SingleClass unless both classes are present.
double RocAuc(std::span<const double> scores, std::span<const int> truth);

struct DetPoint {
  double threshold = 0.0;  // +inf for the terminal point
  double far = 0.0;        // negatives with score >= threshold
  double frr = 0.0;        // positives with score < threshold
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  // Thresholds at every distinct score in increasing order, then +inf.
  std::vector<DetPoint> sweep;
  // The crossing lies between sweep[bracket - 1] and sweep[bracket]; when
  // FAR == FRR exactly at a sweep point, both indices name that point.
  std::size_t bracket_lo = 0;
  std::size_t bracket_hi = 0;
};

/// Equal error rate. FAR(t) counts negatives scoring >= t and FRR(t)
/// positives scoring < t. The sweep visits every distinct score and a
/// final +inf threshold; FAR - FRR falls from 1 to -1 along it, and the EER
/// is the linear interpolation of FAR and FRR at the first sign change.
/// The reported threshold is interpolated the same way; when the upper
/// bracket is the +inf point the lower threshold is reported. Throws
/// SingleClass.
EerResult ComputeEer(std::span<const double> scores, std::span<const int> truth);

/// Fraction classified correctly when score >= threshold means positive.
double BinaryAccuracy(std::span<const double> scores, std::span<const int> truth,
                      double threshold);

/// counts[truth][predicted].
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

ConfusionMatrix BinaryConfusion(std::span<const double> scores, std::span<const int> truth,
                                double threshold);

/// Index of the largest score; ties go to the lowest index.
int ArgmaxClass(std::span<const double> class_scores);

/// Confusion of argmax decisions over n_classes classes.
ConfusionMatrix MulticlassConfusion(const std::vector<std::vector<double>>& class_scores,
                                    std::span<const int> truth, int n_classes);

double AccuracyFromConfusion(const ConfusionMatrix& m);

struct MacroF1Result {
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1;
  // Classes with no truth rows; they contribute F1 = 0.
  std::vector<int> absent_classes;
};

/// Unweighted mean of per-class F1 computed from a confusion matrix.
MacroF1Result MacroF1(const ConfusionMatrix& m);

}  // namespace snrbench

#endif  // SNRBENCH_METRICS_H_
