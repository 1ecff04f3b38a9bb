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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"

namespace snrbench {
namespace {

struct Case {
  std::vector<double> scores;
  std::vector<int> truth;
};

// Pairwise count with ties worth one half.
double OracleAuc(const Case& c) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < c.scores.size(); ++i) {
    if (c.truth[i] != 1) continue;
    for (std::size_t j = 0; j < c.scores.size(); ++j) {
      if (c.truth[j] != 0) continue;
      pairs += 1.0;
      if (c.scores[i] > c.scores[j]) wins += 1.0;
      else if (c.scores[i] == c.scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// FAR and FRR evaluated by counting at each candidate threshold; the EER is
// where the two piecewise-linear curves meet.
double OracleEer(const Case& c) {
  std::set<double> uniq(c.scores.begin(), c.scores.end());
  std::vector<double> ts(uniq.begin(), uniq.end());
  ts.push_back(std::numeric_limits<double>::infinity());
  double npos = 0, nneg = 0;
  for (int t : c.truth) (t ? npos : nneg) += 1;
  std::vector<double> far, frr;
  for (double t : ts) {
    double fa = 0, fr = 0;
    for (std::size_t i = 0; i < c.scores.size(); ++i) {
      if (c.truth[i] == 0 && c.scores[i] >= t) fa += 1;
      if (c.truth[i] == 1 && c.scores[i] < t) fr += 1;
    }
    far.push_back(fa / nneg);
    frr.push_back(fr / npos);
  }
  for (std::size_t k = 1; k < ts.size(); ++k) {
    if (far[k] <= frr[k]) {
      // Solve far0 + a*(far1-far0) == frr0 + a*(frr1-frr0) for a.
      const double a = (far[k - 1] - frr[k - 1]) /
                       ((far[k - 1] - frr[k - 1]) - (far[k] - frr[k]));
      return far[k - 1] + a * (far[k] - far[k - 1]);
    }
  }
  ADD_FAILURE() << "no crossing";
  return -1.0;
}

Case RandomCase(KeyedStream& rng, std::size_t max_n, const std::vector<double>& grid) {
  Case c;
  const std::size_t n = 2 + rng.NextU64() % (max_n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    c.scores.push_back(grid[rng.NextU64() % grid.size()]);
    c.truth.push_back(static_cast<int>(rng.NextU64() % 2));
  }
  // Guarantee both classes.
  c.truth[0] = 1;
  c.truth[1] = 0;
  return c;
}

const std::vector<double> kGrid = {-1.0, 0.0, 0.125, 0.25, 0.5, 0.75, 1.0, 3.0};

TEST(Metrics, WorkedBinaryExample) {
  const std::vector<double> s = {0.8, 0.6, 0.4, 0.7, 0.3, 0.2};
  const std::vector<int> y = {1, 1, 1, 0, 0, 0};
  EXPECT_NEAR(RocAuc(s, y), 7.0 / 9.0, 1e-15);
  const EerResult e = ComputeEer(s, y);
  EXPECT_NEAR(e.eer, 1.0 / 3.0, 1e-15);
  EXPECT_EQ(e.threshold, 0.6);
  ASSERT_EQ(e.sweep.size(), 7u);
  EXPECT_EQ(e.bracket_lo, e.bracket_hi);
  EXPECT_EQ(e.sweep[e.bracket_lo].threshold, 0.6);
  EXPECT_TRUE(std::isinf(e.sweep.back().threshold));
  EXPECT_NEAR(BinaryAccuracy(s, y, 0.6), 4.0 / 6.0, 1e-15);
  const auto cm = BinaryConfusion(s, y, 0.6);
  EXPECT_EQ(cm[1][1], 2u);
  EXPECT_EQ(cm[1][0], 1u);
  EXPECT_EQ(cm[0][1], 1u);
  EXPECT_EQ(cm[0][0], 2u);
}

TEST(Metrics, PerfectAndInvertedRanking) {
  const std::vector<double> s = {0.9, 0.8, 0.1, 0.2};
  const std::vector<int> y = {1, 1, 0, 0};
  EXPECT_EQ(RocAuc(s, y), 1.0);
  EXPECT_EQ(ComputeEer(s, y).eer, 0.0);
  const std::vector<int> flipped = {0, 0, 1, 1};
  EXPECT_EQ(RocAuc(s, flipped), 0.0);
  EXPECT_EQ(ComputeEer(s, flipped).eer, 1.0);
}

TEST(Metrics, AllTiedScoresGiveChance) {
  const std::vector<double> s(6, 0.5);
  const std::vector<int> y = {1, 0, 1, 0, 1, 1};
  EXPECT_EQ(RocAuc(s, y), 0.5);
  EXPECT_NEAR(ComputeEer(s, y).eer, 0.5, 1e-15);
}

TEST(Metrics, SingleClassThrows) {
  const std::vector<double> s = {0.1, 0.2};
  const std::vector<int> y = {1, 1};
  for (auto fn : {+[](std::span<const double> a, std::span<const int> b) { RocAuc(a, b); },
                  +[](std::span<const double> a, std::span<const int> b) { ComputeEer(a, b); }}) {
    try {
      fn(s, y);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
    }
  }
}

TEST(Metrics, ThresholdBelowEverythingAcceptsAll) {
  KeyedStream rng(2);
  for (int i = 0; i < 50; ++i) {
    const Case c = RandomCase(rng, 30, kGrid);
    const double prevalence =
        static_cast<double>(std::count(c.truth.begin(), c.truth.end(), 1)) / c.truth.size();
    EXPECT_NEAR(BinaryAccuracy(c.scores, c.truth, -std::numeric_limits<double>::infinity()),
                prevalence, 1e-15);
  }
}

TEST(Metrics, BruteForceAgreement) {
  KeyedStream rng(20260101);
  for (int i = 0; i < 10000; ++i) {
    const Case c = RandomCase(rng, 8, kGrid);
    ASSERT_NEAR(RocAuc(c.scores, c.truth), OracleAuc(c), 1e-12) << i;
    ASSERT_NEAR(ComputeEer(c.scores, c.truth).eer, OracleEer(c), 1e-12) << i;
  }
}

TEST(Metrics, InvariantUnderMonotoneTransforms) {
  KeyedStream rng(5);
  for (int i = 0; i < 500; ++i) {
    const Case c = RandomCase(rng, 40, kGrid);
    std::vector<double> t1, t2;
    for (double v : c.scores) {
      t1.push_back(std::exp(2.0 * v) + 7.0);
      t2.push_back(1.0 / (1.0 + std::exp(-v)));
    }
    const double auc = RocAuc(c.scores, c.truth);
    const double eer = ComputeEer(c.scores, c.truth).eer;
    EXPECT_NEAR(RocAuc(t1, c.truth), auc, 1e-12);
    EXPECT_NEAR(RocAuc(t2, c.truth), auc, 1e-12);
    EXPECT_NEAR(ComputeEer(t1, c.truth).eer, eer, 1e-12);
    EXPECT_NEAR(ComputeEer(t2, c.truth).eer, eer, 1e-12);
  }
}

TEST(Metrics, NegatingScoresComplementsAuc) {
  KeyedStream rng(6);
  for (int i = 0; i < 500; ++i) {
    const Case c = RandomCase(rng, 40, kGrid);
    std::vector<double> neg;
    for (double v : c.scores) neg.push_back(-v);
    EXPECT_NEAR(RocAuc(c.scores, c.truth) + RocAuc(neg, c.truth), 1.0, 1e-12);
  }
}

TEST(Metrics, PermutationInvariance) {
  KeyedStream rng(7);
  for (int i = 0; i < 300; ++i) {
    Case c = RandomCase(rng, 40, kGrid);
    const double auc = RocAuc(c.scores, c.truth);
    const EerResult e = ComputeEer(c.scores, c.truth);
    for (std::size_t k = c.scores.size() - 1; k > 0; --k) {
      const std::size_t j = rng.NextU64() % (k + 1);
      std::swap(c.scores[k], c.scores[j]);
      std::swap(c.truth[k], c.truth[j]);
    }
    EXPECT_EQ(RocAuc(c.scores, c.truth), auc);
    const EerResult p = ComputeEer(c.scores, c.truth);
    EXPECT_EQ(p.eer, e.eer);
    EXPECT_EQ(p.threshold, e.threshold);
  }
}

TEST(Metrics, SweepIsMonotoneAndBracketsTheEer) {
  KeyedStream rng(8);
  for (int i = 0; i < 500; ++i) {
    const Case c = RandomCase(rng, 40, kGrid);
    const EerResult e = ComputeEer(c.scores, c.truth);
    ASSERT_GE(e.sweep.size(), 2u);
    EXPECT_EQ(e.sweep.front().far, 1.0);
    EXPECT_EQ(e.sweep.front().frr, 0.0);
    EXPECT_EQ(e.sweep.back().far, 0.0);
    EXPECT_EQ(e.sweep.back().frr, 1.0);
    for (std::size_t k = 1; k < e.sweep.size(); ++k) {
      EXPECT_LT(e.sweep[k - 1].threshold, e.sweep[k].threshold);
      EXPECT_LE(e.sweep[k].far, e.sweep[k - 1].far);
      EXPECT_GE(e.sweep[k].frr, e.sweep[k - 1].frr);
    }
    const auto& lo = e.sweep[e.bracket_lo];
    const auto& hi = e.sweep[e.bracket_hi];
    // FAR falls and FRR rises across the bracket, so both meet inside it.
    EXPECT_GE(e.eer, std::max(lo.frr, hi.far) - 1e-12);
    EXPECT_LE(e.eer, std::min(lo.far, hi.frr) + 1e-12);
    EXPECT_GE(e.threshold, lo.threshold);
    if (std::isfinite(hi.threshold)) EXPECT_LE(e.threshold, hi.threshold);
    EXPECT_GE(e.eer, 0.0);
    EXPECT_LE(e.eer, 1.0);
  }
}

TEST(Metrics, GaussianScoresGiveTheNormalTailEer) {
  KeyedStream rng(9);
  std::vector<double> s;
  std::vector<int> y;
  for (int i = 0; i < 20000; ++i) {
    for (int cls = 0; cls < 2; ++cls) {
      const double u1 = 1.0 - rng.NextUniform();
      const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * rng.NextUniform());
      s.push_back(g + (cls ? 1.0 : -1.0));
      y.push_back(cls);
    }
  }
  // Means +-1, unit variance: EER = Phi(-1).
  const double phi = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(ComputeEer(s, y).eer, phi, 0.01);
  // AUC = Phi(2 / sqrt(2)).
  EXPECT_NEAR(RocAuc(s, y), 0.5 * std::erfc(-1.0), 0.01);
}

TEST(Multiclass, ConstantPredictionOnBalancedTruth) {
  std::vector<std::vector<double>> scores;
  std::vector<int> truth;
  for (int i = 0; i < 40; ++i) {
    scores.push_back({0.9, 0.1, 0.1, 0.1});
    truth.push_back(i % 4);
  }
  const auto cm = MulticlassConfusion(scores, truth, 4);
  EXPECT_NEAR(AccuracyFromConfusion(cm), 0.25, 1e-15);
  const auto f1 = MacroF1(cm);
  EXPECT_NEAR(f1.per_class_f1[0], 0.4, 1e-15);
  EXPECT_NEAR(f1.macro_f1, 0.1, 1e-15);
  EXPECT_TRUE(f1.absent_classes.empty());
}

TEST(Multiclass, ArgmaxTiesGoToTheLowestIndex) {
  EXPECT_EQ(ArgmaxClass(std::vector<double>{0.2, 0.7, 0.7, 0.1}), 1);
  EXPECT_EQ(ArgmaxClass(std::vector<double>{0.5, 0.5, 0.5, 0.5}), 0);
  EXPECT_EQ(ArgmaxClass(std::vector<double>{-3.0, -1.0, -2.0, -1.5}), 1);
}

TEST(Multiclass, MacroF1MatchesHandComputation) {
  // truth x predicted
  const ConfusionMatrix cm = {{5, 1, 0, 0}, {2, 3, 1, 0}, {0, 0, 4, 0}, {0, 0, 0, 0}};
  const auto f1 = MacroF1(cm);
  const double f0 = 2.0 * 5 / (2.0 * 5 + 1 + 2);
  const double f1c = 2.0 * 3 / (2.0 * 3 + 3 + 1);
  const double f2 = 2.0 * 4 / (2.0 * 4 + 0 + 1);
  EXPECT_NEAR(f1.per_class_f1[0], f0, 1e-15);
  EXPECT_NEAR(f1.per_class_f1[1], f1c, 1e-15);
  EXPECT_NEAR(f1.per_class_f1[2], f2, 1e-15);
  EXPECT_EQ(f1.per_class_f1[3], 0.0);
  EXPECT_NEAR(f1.macro_f1, (f0 + f1c + f2) / 4.0, 1e-15);
  EXPECT_EQ(f1.absent_classes, std::vector<int>{3});
  EXPECT_NEAR(AccuracyFromConfusion(cm), 12.0 / 16.0, 1e-15);
}

TEST(Multiclass, ConfusionCountsEveryRowOnce) {
  KeyedStream rng(10);
  std::vector<std::vector<double>> scores;
  std::vector<int> truth;
  for (int i = 0; i < 300; ++i) {
    std::vector<double> row(4);
    for (double& v : row) v = rng.NextUniform();
    scores.push_back(row);
    truth.push_back(static_cast<int>(rng.NextU64() % 4));
  }
  const auto cm = MulticlassConfusion(scores, truth, 4);
  std::size_t total = 0, diag = 0;
  for (int t = 0; t < 4; ++t) {
    for (int p = 0; p < 4; ++p) total += cm[t][p];
    diag += cm[t][t];
  }
  EXPECT_EQ(total, 300u);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) correct += ArgmaxClass(scores[i]) == truth[i];
  EXPECT_EQ(diag, correct);
}

}  // namespace
}  // namespace snrbench
