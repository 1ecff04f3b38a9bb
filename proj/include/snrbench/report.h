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

#ifndef SNRBENCH_REPORT_H_
#define SNRBENCH_REPORT_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snrbench/metrics.h"
#include "snrbench/score_file.h"

namespace snrbench {

// Metrics for one slice of the score rows. Optional fields are null when
// the slice cannot support them (a single class, or a four-class task for
// the ranking metrics).
struct ConditionMetrics {
  std::string name;  // "clean", an SNR such as "-5", or "pooled"
  std::optional<Condition> condition;  // unset for the pooled row
  std::size_t n_trials = 0;
  std::optional<double> accuracy;
  std::optional<double> accuracy_threshold;
  std::optional<double> roc_auc;
  std::optional<double> eer;
  std::optional<double> eer_threshold;
  std::optional<double> macro_f1;
  std::vector<int> absent_classes;
  ConfusionMatrix confusion;
  std::vector<DetPoint> sweep;
};

struct MetricReport {
  Task task = Task::kBinarySpoof;
  // "fixed" when the caller supplied a threshold, else "eer".
  std::string threshold_policy = "eer";
  std::optional<double> fixed_threshold;
  // Digest of the evaluation run itself (score contents and threshold).
  std::string config_digest;
  // Digests carried by the input score files.
  std::vector<std::string> config_digests;
  std::vector<ConditionMetrics> conditions;  // clean first, then SNR descending
  ConditionMetrics pooled;
  std::vector<std::string> warnings;
};

/// Groups rows by condition and computes every metric per group and pooled.
/// All files must share one task and utterance ids must be unique across
/// them. For binary_noise the positive (clean) rows are shared by every
/// SNR row, so each SNR slice is "clean vs. that SNR". Binary accuracy
/// uses the fixed threshold if given, else the slice's EER threshold,
/// else the pooled EER threshold.
MetricReport PerConditionCurves(const std::vector<ScoreFile>& files,
                                std::optional<double> threshold = std::nullopt);

std::string FormatReportTable(const MetricReport& report);
std::string SerializeReportJsonl(const MetricReport& report);
std::string SerializeReportCsv(const MetricReport& report);
MetricReport ParseReportJsonl(std::string_view text, const std::string& source = "<memory>");
MetricReport ReadReportJsonl(const std::filesystem::path& path);

/// Row of the p_noisy sweep table.
struct SweepEntry {
  double p_noisy = 0.0;
  MetricReport report;
};

/// CSV with one row per entry, in the order given:
///   p_noisy,condition,n_trials,eer,roc_auc,accuracy,macro_f1
/// condition_name picks a report row ("pooled", "clean", or an SNR).
std::string SerializeSweepCsv(const std::vector<SweepEntry>& entries,
                              const std::string& condition_name,
                              const std::string& config_digest = "");

inline constexpr const char* kReportTableFile = "report.txt";
inline constexpr const char* kReportJsonlFile = "report.jsonl";
inline constexpr const char* kReportCsvFile = "curves.csv";

}  // namespace snrbench

#endif  // SNRBENCH_REPORT_H_
