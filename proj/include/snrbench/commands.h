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

#ifndef SNRBENCH_COMMANDS_H_
#define SNRBENCH_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snrbench/condition_plan.h"
#include "snrbench/lfcc.h"
#include "snrbench/linear_scorer.h"
#include "snrbench/manifest.h"
#include "snrbench/report.h"
#include "snrbench/score_file.h"
#include "snrbench/wav_io.h"

namespace snrbench {

// Each command is a pure function of its inputs and arguments: running it
// twice writes byte-identical files. Every file written carries the
// config digest of the run that produced it.

struct ScanArgs {
  std::filesystem::path speech_root;
  std::vector<ProtocolSource> protocols;
  int key_col = 1;
  int label_col = -1;
  std::string audio_ext = ".wav";
  std::filesystem::path noise_root;
  std::filesystem::path out;  // manifest file
  int jobs = 1;
};

Manifest CmdScan(const ScanArgs& args);

enum class BuildMode { kMulticondition, kFixedSnr, kMixedTest, kPNoisySweep };

struct BuildArgs {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  BuildMode mode = BuildMode::kMulticondition;
  std::vector<double> fixed_snrs;      // kFixedSnr: one output per value
  std::vector<double> sweep_fractions;  // kPNoisySweep: one output per value
  SamplingPolicy policy;
  WavBitDepth bit_depth = WavBitDepth::kFloat32;
  int jobs = 1;
};

struct BuiltSplit {
  std::filesystem::path dir;
  std::string config_digest;
  std::size_t rendered = 0;
  std::size_t skipped = 0;
};

/// Multicondition and mixed-test render into out_dir itself; fixed-SNR
/// renders into out_dir/snr_<db> and the sweep into out_dir/p_<fraction>.
std::vector<BuiltSplit> CmdBuild(const BuildArgs& args);

/// Output sub-directory names used by CmdBuild.
std::string FixedSnrDirName(double snr_db);
std::string SweepDirName(double p_noisy);

struct ScoreBaselineArgs {
  std::vector<std::filesystem::path> train_dirs;
  std::string train_split = "train";
  std::vector<std::filesystem::path> eval_dirs;
  std::string eval_split = "test";
  Task task = Task::kBinarySpoof;
  std::optional<std::filesystem::path> model_in;
  std::optional<std::filesystem::path> model_out;
  std::filesystem::path out;  // score file
  std::uint64_t seed = 0;
  LfccConfig lfcc;
  TrainOptions train;
  int jobs = 1;
};

ScoreFile CmdScoreBaseline(const ScoreBaselineArgs& args);

struct EvalArgs {
  std::vector<std::filesystem::path> scores;
  std::filesystem::path out_dir;
  std::optional<double> threshold;
};

MetricReport CmdEval(const EvalArgs& args);

struct SweepReportArgs {
  // (p_noisy, report.jsonl path) in output order.
  std::vector<std::pair<double, std::filesystem::path>> entries;
  std::string condition = "pooled";
  std::filesystem::path out;
};

void CmdSweepReport(const SweepReportArgs& args);

/// Parses "p=path" as used by sweep-report --entry.
std::pair<double, std::filesystem::path> ParseSweepEntry(const std::string& text);

/// Parses "split=path" as used by scan --protocol.
ProtocolSource ParseProtocolArg(const std::string& text);

}  // namespace snrbench

#endif  // SNRBENCH_COMMANDS_H_
