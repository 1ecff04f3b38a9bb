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

#include "snrbench/cli.h"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "snrbench/commands.h"
#include "snrbench/error.h"

namespace snrbench {
namespace {

void ReportError(std::ostream& err, std::string_view code, std::string_view kind,
                 std::string_view message) {
  nlohmann::ordered_json j;
  j["error"]["code"] = code;
  j["error"]["kind"] = kind;
  j["error"]["message"] = message;
  err << j.dump() << "\n";
}

std::string_view KindName(ErrorKind k) {
  switch (k) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kData: return "data";
    case ErrorKind::kInternal: return "internal";
  }
  return "internal";
}

int ExitCodeFor(ErrorKind k) {
  switch (k) {
    case ErrorKind::kConfig: return kExitConfigError;
    case ErrorKind::kData: return kExitDataError;
    case ErrorKind::kInternal: return kExitInternalError;
  }
  return kExitInternalError;
}

Split SplitOrThrow(const std::string& s) {
  const auto split = ParseSplit(s);
  if (!split) throw Error(ErrorCode::kConfigError, "unknown split '" + s + "'");
  return *split;
}

struct ScanFlags {
  ScanArgs args;
  std::vector<std::string> protocols;
};

struct BuildFlags {
  BuildArgs args;
  std::uint64_t seed = 0;
  std::vector<std::string> splits;
  std::string bit_depth = "float32";
};

struct ScoreFlags {
  ScoreBaselineArgs args;
  std::string task = "binary_spoof";
  std::string model_in;
  std::string model_out;
};

struct SweepFlags {
  SweepReportArgs args;
  std::vector<std::string> entries;
};

void AddPolicyOptions(CLI::App* build, BuildFlags* f) {
  SamplingPolicy& p = f->args.policy;
  build->add_option("--manifest", f->args.manifest, "Manifest written by scan")->required();
  build->add_option("--out-dir", f->args.out_dir, "Directory for rendered audio and sidecars")
      ->required();
  build->add_option("--seed", f->seed, "Root seed for every random draw")->required();
  build->add_option("--p-noisy", p.p_noisy, "Probability that a trial is corrupted")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  build->add_option("--p-two-noise", p.p_two_noise, "Probability of summing two noise clips")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  build->add_option("--snr-grid", p.snr_grid, "SNR values in dB to draw from")->expected(1, -1);
  build->add_option("--segment-len", p.segment_len_s, "Segment length in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  build->add_option("--split", f->splits, "Restrict to these splits (train, dev, test)");
  build->add_option("--exclude-category", p.excluded_categories,
                    "Noise categories never drawn, e.g. office or other:babble");
  build->add_option("--bit-depth", f->bit_depth, "Output encoding")
      ->check(CLI::IsMember({"pcm16", "float32"}))
      ->capture_default_str();
  build->add_option("--jobs", f->args.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-robustness benchmark builder and evaluator for spoofed-speech detection"};
  app.name("snrbench");
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);

  ScanFlags scan;
  CLI::App* scan_cmd = app.add_subcommand("scan", "Index speech protocols and a noise corpus");
  scan_cmd->add_option("--speech-root", scan.args.speech_root, "Directory holding speech audio")
      ->envname("SNRBENCH_SPEECH_ROOT")
      ->required();
  scan_cmd->add_option("--protocol", scan.protocols, "split=path, repeatable")->required();
  scan_cmd->add_option("--key-col", scan.args.key_col, "Utterance id column (negative from end)")
      ->capture_default_str();
  scan_cmd->add_option("--label-col", scan.args.label_col, "Label column (negative from end)")
      ->capture_default_str();
  scan_cmd->add_option("--audio-ext", scan.args.audio_ext, "Speech file extension")
      ->capture_default_str();
  scan_cmd->add_option("--noise-root", scan.args.noise_root, "Directory of categorized noise")
      ->envname("SNRBENCH_NOISE_ROOT");
  scan_cmd->add_option("--out", scan.args.out, "Manifest path")->required();
  scan_cmd->add_option("--jobs", scan.args.jobs, "Worker threads")->check(CLI::PositiveNumber);

  BuildFlags build;
  CLI::App* build_cmd = app.add_subcommand("build", "Plan conditions and render a split");
  AddPolicyOptions(build_cmd, &build);
  build_cmd->require_subcommand(1);
  CLI::App* multi_cmd = build_cmd->add_subcommand("multicondition", "Clean/noisy mixture, p_noisy");
  CLI::App* fixed_cmd = build_cmd->add_subcommand("fixed-snr", "Every trial noisy at one SNR");
  fixed_cmd->add_option("snr_db", build.args.fixed_snrs, "One output split per SNR")
      ->required()
      ->allow_extra_args();
  CLI::App* mixed_cmd = build_cmd->add_subcommand("mixed-test", "80% noisy test, 20% noisy dev");
  CLI::App* sweep_cmd = build_cmd->add_subcommand("pnoisy-sweep", "One split per noisy fraction");
  sweep_cmd->add_option("fractions", build.args.sweep_fractions, "Noisy fractions in [0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  for (CLI::App* sub : {multi_cmd, fixed_cmd, mixed_cmd, sweep_cmd}) sub->fallthrough();

  ScoreFlags score;
  CLI::App* score_cmd =
      app.add_subcommand("score-baseline", "Train or load the LFCC linear scorer and score a split");
  score_cmd->add_option("--train", score.args.train_dirs, "Rendered directories to train on");
  score_cmd->add_option("--train-split", score.args.train_split, "Split used for training")
      ->capture_default_str();
  score_cmd->add_option("--eval", score.args.eval_dirs, "Rendered directories to score")->required();
  score_cmd->add_option("--eval-split", score.args.eval_split, "Split that gets scored")
      ->capture_default_str();
  score_cmd->add_option("--task", score.task, "binary_spoof, binary_noise or four_class")
      ->check(CLI::IsMember({"binary_spoof", "binary_noise", "four_class"}))
      ->capture_default_str();
  score_cmd->add_option("--model-in", score.model_in, "Load a trained model instead of training");
  score_cmd->add_option("--model-out", score.model_out, "Save the trained model here");
  score_cmd->add_option("--seed", score.args.seed, "Training seed")->required();
  score_cmd->add_option("--out", score.args.out, "Score file path")->required();
  score_cmd->add_option("--epochs", score.args.train.epochs)->check(CLI::PositiveNumber)
      ->capture_default_str();
  score_cmd->add_option("--lr", score.args.train.learning_rate)->check(CLI::PositiveNumber)
      ->capture_default_str();
  score_cmd->add_option("--n-filters", score.args.lfcc.n_filters)->capture_default_str();
  score_cmd->add_option("--n-ceps", score.args.lfcc.n_ceps)->capture_default_str();
  score_cmd->add_flag("--deltas", score.args.lfcc.include_deltas, "Append delta coefficients");
  score_cmd->add_option("--jobs", score.args.jobs, "Worker threads")->check(CLI::PositiveNumber);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Per-condition metrics from score files");
  eval_cmd->add_option("--scores", eval.scores, "Score files")->required();
  eval_cmd->add_option("--out-dir", eval.out_dir, "Report directory")->required();
  eval_cmd->add_option("--threshold", eval.threshold,
                       "Fixed accuracy threshold; default is the EER threshold");

  SweepFlags sweep;
  CLI::App* sweep_report_cmd =
      app.add_subcommand("sweep-report", "Join p_noisy sweep reports into one CSV");
  sweep_report_cmd->add_option("--entry", sweep.entries, "p_noisy=report.jsonl, repeatable")
      ->required();
  sweep_report_cmd->add_option("--condition", sweep.args.condition,
                               "Report row to extract: pooled, clean or an SNR")
      ->capture_default_str();
  sweep_report_cmd->add_option("--out", sweep.args.out, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    ReportError(err, "UsageError", "config", e.what());
    return kExitConfigError;
  }

  try {
    if (*scan_cmd) {
      for (const auto& p : scan.protocols) scan.args.protocols.push_back(ParseProtocolArg(p));
      const Manifest m = CmdScan(scan.args);
      out << "scan: " << m.trials.size() << " trials, " << m.noises.size() << " noise clips -> "
          << scan.args.out.string() << "\n";
    } else if (*build_cmd) {
      build.args.policy.root_seed = build.seed;
      for (const auto& s : build.splits) build.args.policy.splits.push_back(SplitOrThrow(s));
      build.args.bit_depth = build.bit_depth == "pcm16" ? WavBitDepth::kPcm16 : WavBitDepth::kFloat32;
      if (*multi_cmd) build.args.mode = BuildMode::kMulticondition;
      if (*fixed_cmd) build.args.mode = BuildMode::kFixedSnr;
      if (*mixed_cmd) build.args.mode = BuildMode::kMixedTest;
      if (*sweep_cmd) build.args.mode = BuildMode::kPNoisySweep;
      for (const auto& b : CmdBuild(build.args)) {
        out << "build: " << b.rendered << " rendered, " << b.skipped << " skipped -> "
            << b.dir.string() << " (config " << b.config_digest.substr(0, 12) << ")\n";
      }
    } else if (*score_cmd) {
      score.args.task = *ParseTask(score.task);
      if (!score.model_in.empty()) score.args.model_in = score.model_in;
      if (!score.model_out.empty()) score.args.model_out = score.model_out;
      const ScoreFile f = CmdScoreBaseline(score.args);
      out << "score-baseline: " << f.rows.size() << " rows -> " << score.args.out.string() << "\n";
    } else if (*eval_cmd) {
      const MetricReport r = CmdEval(eval);
      out << FormatReportTable(r);
    } else if (*sweep_report_cmd) {
      for (const auto& e : sweep.entries) sweep.args.entries.push_back(ParseSweepEntry(e));
      CmdSweepReport(sweep.args);
      out << "sweep-report: " << sweep.args.entries.size() << " rows -> "
          << sweep.args.out.string() << "\n";
    }
  } catch (const Error& e) {
    std::string_view msg = e.what();
    const std::string_view name = ErrorCodeName(e.code());
    if (msg.starts_with(name) && msg.substr(name.size()).starts_with(": ")) {
      msg.remove_prefix(name.size() + 2);
    }
    ReportError(err, name, KindName(e.kind()), msg);
    return ExitCodeFor(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    ReportError(err, "IoFailure", "data", e.what());
    return kExitDataError;
  } catch (const std::exception& e) {
    ReportError(err, "Internal", "internal", e.what());
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace snrbench
