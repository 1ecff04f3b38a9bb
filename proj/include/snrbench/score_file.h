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

#ifndef SNRBENCH_SCORE_FILE_H_
#define SNRBENCH_SCORE_FILE_H_

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace snrbench {

enum class Task { kBinarySpoof, kBinaryNoise, kFourClass };

std::string_view ToString(Task task);
std::optional<Task> ParseTask(std::string_view s);
int ScoreColumns(Task task);  // 1 for binary tasks, 4 for four-class
int ClassCount(Task task);    // 2 or 4

/// Truth labels as strings, indexed by class id. Binary tasks use class 1
/// for the positive side (bonafide, or clean for noise discrimination).
std::string_view ClassName(Task task, int cls);
std::optional<int> ParseClass(Task task, std::string_view s);

/// Test condition of a trial: clean, or noisy at a given SNR.
struct Condition {
  bool clean = true;
  double snr_db = 0.0;

  static Condition Clean() { return {true, 0.0}; }
  static Condition AtSnr(double snr) { return {false, snr}; }

  /// "clean" or the shortest round-trip decimal form of the SNR.
  std::string ToString() const;
  static std::optional<Condition> Parse(std::string_view s);

  friend bool operator==(const Condition& a, const Condition& b) {
    return a.clean == b.clean && (a.clean || a.snr_db == b.snr_db);
  }
};

/// Report order: clean first, then SNR from high to low.
bool ConditionBefore(const Condition& a, const Condition& b);

struct ScoreRow {
  std::string utt_id;
  Condition condition;
  int truth = 0;
  std::vector<double> scores;  // 1 value (binary) or 4 (four-class)
};

struct ScoreFile {
  Task task = Task::kBinarySpoof;
  std::vector<ScoreRow> rows;
  std::string config_digest;  // optional provenance comment
};

/// Tab-separated, one header row:
///   utt_id task condition truth score                         (binary)
///   utt_id task condition truth score_real_clean ... (x4)     (four-class)
/// Lines starting with '#' are comments; "# config_digest=<hex>" is kept.
std::string SerializeScoreFile(const ScoreFile& file);
void WriteScoreFile(const ScoreFile& file, const std::filesystem::path& path);
ScoreFile ParseScoreFile(std::string_view text, const std::string& source = "<memory>");
ScoreFile ReadScoreFile(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly v.
std::string FormatDouble(double v);

}  // namespace snrbench

#endif  // SNRBENCH_SCORE_FILE_H_
