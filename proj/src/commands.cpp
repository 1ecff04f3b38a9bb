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

#include "snrbench/commands.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "snrbench/digest.h"
#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"
#include "snrbench/parallel.h"
#include "snrbench/render.h"

namespace snrbench {
namespace fs = std::filesystem;
namespace {

void RequireDirectory(const fs::path& p, const std::string& what) {
  if (p.empty()) throw Error(ErrorCode::kConfigError, what + " is not set");
  std::error_code ec;
  if (!fs::is_directory(p, ec)) {
    throw Error(ErrorCode::kConfigError, what + " " + p.string() + " is not a directory");
  }
}

void RequireFile(const fs::path& p, const std::string& what) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) {
    throw Error(ErrorCode::kConfigError, what + " " + p.string() + " does not exist");
  }
}

void EnsureDirectory(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + p.string() + ": " + ec.message());
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) EnsureDirectory(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

std::string_view ToString(BuildMode m) {
  switch (m) {
    case BuildMode::kMulticondition: return "multicondition";
    case BuildMode::kFixedSnr: return "fixed-snr";
    case BuildMode::kMixedTest: return "mixed-test";
    case BuildMode::kPNoisySweep: return "pnoisy-sweep";
  }
  return "";
}

std::string LfccKey(const LfccConfig& c) {
  std::ostringstream s;
  s << "lfcc rate=" << c.sample_rate << " len_ms=" << FormatDouble(c.frame_len_ms)
    << " hop_ms=" << FormatDouble(c.frame_hop_ms) << " fft=" << c.fft_size
    << " filters=" << c.n_filters << " ceps=" << c.n_ceps << " deltas=" << c.include_deltas
    << " pre=" << FormatDouble(c.preemphasis) << " floor=" << FormatDouble(c.log_floor);
  return s.str();
}

std::string TrainKey(const TrainOptions& t) {
  std::ostringstream s;
  s << "train epochs=" << t.epochs << " lr=" << FormatDouble(t.learning_rate)
    << " init=" << FormatDouble(t.init_scale) << " seed=" << t.seed;
  if (t.class_weights) {
    s << " weights=" << FormatDouble((*t.class_weights)[0]) << ","
      << FormatDouble((*t.class_weights)[1]);
  }
  return s.str();
}

int TruthFor(Task task, const LabelRecord& label) {
  switch (task) {
    case Task::kBinarySpoof: return label.authenticity == Authenticity::kBonafide ? 1 : 0;
    case Task::kBinaryNoise: return label.corruption == Corruption::kClean ? 1 : 0;
    case Task::kFourClass: return static_cast<int>(label.four_class_label);
  }
  return 0;
}

struct FeatureRow {
  LabelRecord label;
  std::string row_id;
  std::vector<double> features;
};

std::string ConditionText(const LabelRecord& l) {
  return l.snr_db ? FormatDouble(*l.snr_db) : std::string("clean");
}

// Loads labels of the requested split from each rendered directory and
// extracts utterance-level LFCC statistics. Also appends each labels file
// digest to *digest_material. An utterance may appear once per condition;
// when any utterance appears under several conditions, every row id
// becomes "<utt_id>@<condition>".
std::vector<FeatureRow> LoadFeatures(const std::vector<fs::path>& dirs, const std::string& split,
                                     const LfccConfig& lfcc, int jobs,
                                     std::string* digest_material) {
  const auto want = ParseSplit(split);
  if (!want) throw Error(ErrorCode::kConfigError, "unknown split '" + split + "'");
  std::vector<std::pair<fs::path, LabelRecord>> items;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string, std::less<>> ids;
  bool qualify = false;
  for (const auto& dir : dirs) {
    RequireDirectory(dir, "rendered split");
    const fs::path labels_path = dir / kLabelsFile;
    RequireFile(labels_path, "labels file");
    *digest_material += "labels " + Sha256FileHex(labels_path) + "\n";
    for (auto& l : ReadLabels(labels_path)) {
      if (l.split != *want) continue;
      if (!seen.emplace(l.utt_id, ConditionText(l)).second) {
        throw Error(ErrorCode::kDuplicateUttId, "utt_id " + l.utt_id + " at condition " +
                                                    ConditionText(l) + " in more than one split dir");
      }
      qualify = qualify || !ids.insert(l.utt_id).second;
      items.emplace_back(dir, std::move(l));
    }
  }
  auto row_id = [qualify](const LabelRecord& l) {
    return qualify ? l.utt_id + "@" + ConditionText(l) : l.utt_id;
  };
  std::sort(items.begin(), items.end(),
            [&](const auto& a, const auto& b) { return row_id(a.second) < row_id(b.second); });
  std::vector<FeatureRow> rows(items.size());
  ParallelFor(items.size(), jobs, [&](std::size_t i) {
    const AudioBuffer audio = DecodeWav(RenderedAudioPath(items[i].first, items[i].second.utt_id));
    rows[i].label = items[i].second;
    rows[i].row_id = row_id(items[i].second);
    rows[i].features = ExtractLfcc(audio, lfcc).Summary();
  });
  return rows;
}

}  // namespace

std::string FixedSnrDirName(double snr_db) { return "snr_" + FormatDouble(snr_db); }
std::string SweepDirName(double p_noisy) { return "p_" + FormatDouble(p_noisy); }

ProtocolSource ParseProtocolArg(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "protocol '" + text + "' must look like split=path");
  }
  const auto split = ParseSplit(text.substr(0, eq));
  if (!split) throw Error(ErrorCode::kConfigError, "unknown split in '" + text + "'");
  return {fs::path(text.substr(eq + 1)), *split};
}

std::pair<double, fs::path> ParseSweepEntry(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "entry '" + text + "' must look like p_noisy=report.jsonl");
  }
  const auto cond = Condition::Parse(text.substr(0, eq));
  if (!cond || cond->clean || cond->snr_db < 0.0 || cond->snr_db > 1.0) {
    throw Error(ErrorCode::kConfigError, "entry '" + text + "' needs a fraction in [0, 1]");
  }
  return {cond->snr_db, fs::path(text.substr(eq + 1))};
}

Manifest CmdScan(const ScanArgs& args) {
  RequireDirectory(args.speech_root, "speech root");
  if (args.protocols.empty()) throw Error(ErrorCode::kConfigError, "no protocol files given");
  for (const auto& p : args.protocols) RequireFile(p.path, "protocol");
  if (!args.noise_root.empty()) RequireDirectory(args.noise_root, "noise root");
  if (args.out.empty()) throw Error(ErrorCode::kConfigError, "manifest output path is not set");

  ProtocolLayout layout;
  layout.key_col = args.key_col;
  layout.label_col = args.label_col;
  layout.audio_root = args.speech_root;
  layout.audio_ext = args.audio_ext;

  Manifest manifest;
  manifest.header.created_utc = ReproducibleTimestamp();
  manifest.trials = ScanSpeech(args.protocols, layout, args.jobs);
  if (!args.noise_root.empty()) {
    manifest.noises = ScanNoiseCatalog(args.noise_root, DefaultCategoryAliases(), args.jobs);
  }
  ComputeDigests(&manifest, args.jobs);
  if (args.out.has_parent_path()) EnsureDirectory(args.out.parent_path());
  WriteManifest(manifest, args.out);
  return manifest;
}

std::vector<BuiltSplit> CmdBuild(const BuildArgs& args) {
  RequireFile(args.manifest, "manifest");
  if (args.out_dir.empty()) throw Error(ErrorCode::kConfigError, "output directory is not set");
  if (args.mode == BuildMode::kFixedSnr && args.fixed_snrs.empty()) {
    throw Error(ErrorCode::kConfigError, "fixed-snr needs at least one SNR");
  }
  if (args.mode == BuildMode::kPNoisySweep && args.sweep_fractions.empty()) {
    throw Error(ErrorCode::kConfigError, "pnoisy-sweep needs at least one fraction");
  }

  const Manifest manifest = ReadManifest(args.manifest);
  const auto stale = VerifyDigests(manifest, args.jobs);
  if (!stale.empty()) {
    throw Error(ErrorCode::kSchemaViolation, std::to_string(stale.size()) +
                                                 " source files changed since scan, first: " +
                                                 stale.front());
  }
  const std::string base = "manifest " + CanonicalManifestDigest(manifest) + "\nmode " +
                           std::string(ToString(args.mode)) + "\nbit_depth " +
                           (args.bit_depth == WavBitDepth::kPcm16 ? "pcm16" : "float32") +
                           "\npolicy " + PolicyToJsonString(args.policy) + "\n";

  std::vector<std::pair<fs::path, std::pair<ConditionPlan, std::string>>> jobs;
  switch (args.mode) {
    case BuildMode::kMulticondition:
      jobs.push_back({args.out_dir, {PlanMulticondition(manifest, args.policy), base}});
      break;
    case BuildMode::kMixedTest:
      jobs.push_back({args.out_dir, {PlanMixedTest(manifest, args.policy), base}});
      break;
    case BuildMode::kFixedSnr:
      for (double snr : args.fixed_snrs) {
        jobs.push_back({args.out_dir / FixedSnrDirName(snr),
                        {PlanFixedSnr(manifest, SnrDb{snr}, args.policy),
                         base + "fixed_snr " + FormatDouble(snr) + "\n"}});
      }
      break;
    case BuildMode::kPNoisySweep: {
      auto plans = PlanPNoisySweep(manifest, args.sweep_fractions, args.policy);
      for (std::size_t i = 0; i < plans.size(); ++i) {
        const double p = args.sweep_fractions[i];
        jobs.push_back({args.out_dir / SweepDirName(p),
                        {std::move(plans[i]), base + "p_noisy " + FormatDouble(p) + "\n"}});
      }
      break;
    }
  }

  std::vector<BuiltSplit> built;
  for (auto& [dir, plan_and_key] : jobs) {
    RenderOptions opts;
    opts.out_dir = dir;
    opts.bit_depth = args.bit_depth;
    opts.jobs = args.jobs;
    opts.config_digest = Sha256Hex(plan_and_key.second);
    const RenderSummary summary = Materialize(plan_and_key.first, manifest, opts);
    built.push_back({dir, opts.config_digest, summary.rendered, summary.skipped.size()});
  }
  return built;
}

ScoreFile CmdScoreBaseline(const ScoreBaselineArgs& args) {
  if (args.eval_dirs.empty()) throw Error(ErrorCode::kConfigError, "no evaluation directories");
  if (!args.model_in && args.train_dirs.empty()) {
    throw Error(ErrorCode::kConfigError, "need --train directories or --model-in");
  }
  if (args.out.empty()) throw Error(ErrorCode::kConfigError, "score output path is not set");
  args.lfcc.Validate();

  std::string material = "task " + std::string(ToString(args.task)) + "\n" + LfccKey(args.lfcc) + "\n";
  const int n_scorers = args.task == Task::kFourClass ? 4 : 1;
  std::vector<LinearScorer> scorers;

  if (args.model_in) {
    RequireFile(*args.model_in, "model");
    std::string task_name;
    scorers = ReadScorers(*args.model_in, &task_name);
    if (task_name != ToString(args.task) || static_cast<int>(scorers.size()) != n_scorers) {
      throw Error(ErrorCode::kConfigError, "model " + args.model_in->string() + " is for task " +
                                               task_name + ", not " + std::string(ToString(args.task)));
    }
    material += "model " + Sha256FileHex(*args.model_in) + "\n";
  } else {
    TrainOptions train = args.train;
    train.seed = args.seed;
    material += TrainKey(train) + "\ntrain_split " + args.train_split + "\n";
    const auto rows = LoadFeatures(args.train_dirs, args.train_split, args.lfcc, args.jobs, &material);
    if (rows.empty()) {
      throw Error(ErrorCode::kEmptyPayload, "no '" + args.train_split + "' trials in training dirs");
    }
    for (int c = 0; c < n_scorers; ++c) {
      std::vector<LabeledExample> data;
      data.reserve(rows.size());
      for (const auto& r : rows) {
        const int truth = TruthFor(args.task, r.label);
        data.push_back({r.features, n_scorers == 1 ? truth : (truth == c ? 1 : 0)});
      }
      TrainOptions per_class = train;
      if (n_scorers > 1) per_class.seed = DeriveSeed(train.seed, static_cast<std::uint64_t>(c));
      scorers.push_back(TrainScorer(data, per_class));
    }
  }

  material += "eval_split " + args.eval_split + "\n";
  const auto eval_rows = LoadFeatures(args.eval_dirs, args.eval_split, args.lfcc, args.jobs, &material);
  if (eval_rows.empty()) {
    throw Error(ErrorCode::kEmptyPayload, "no '" + args.eval_split + "' trials in evaluation dirs");
  }

  ScoreFile file;
  file.task = args.task;
  file.config_digest = Sha256Hex(material);
  if (args.model_out) {
    WriteScorers(scorers, std::string(ToString(args.task)), *args.model_out, file.config_digest);
  }
  for (const auto& r : eval_rows) {
    ScoreRow row;
    row.utt_id = r.row_id;
    row.condition = r.label.snr_db ? Condition::AtSnr(*r.label.snr_db) : Condition::Clean();
    row.truth = TruthFor(args.task, r.label);
    for (const auto& s : scorers) row.scores.push_back(s.Score(r.features));
    file.rows.push_back(std::move(row));
  }
  if (args.out.has_parent_path()) EnsureDirectory(args.out.parent_path());
  WriteScoreFile(file, args.out);
  return file;
}

MetricReport CmdEval(const EvalArgs& args) {
  if (args.scores.empty()) throw Error(ErrorCode::kConfigError, "no score files given");
  if (args.out_dir.empty()) throw Error(ErrorCode::kConfigError, "output directory is not set");
  std::vector<ScoreFile> files;
  std::string material = "eval\n";
  for (const auto& p : args.scores) {
    RequireFile(p, "score file");
    files.push_back(ReadScoreFile(p));
    material += "scores " + Sha256Hex(SerializeScoreFile(files.back())) + "\n";
  }
  if (args.threshold) material += "threshold " + FormatDouble(*args.threshold) + "\n";
  MetricReport report = PerConditionCurves(files, args.threshold);
  report.config_digest = Sha256Hex(material);
  EnsureDirectory(args.out_dir);
  WriteText(args.out_dir / kReportTableFile, FormatReportTable(report));
  WriteText(args.out_dir / kReportJsonlFile, SerializeReportJsonl(report));
  WriteText(args.out_dir / kReportCsvFile, SerializeReportCsv(report));
  return report;
}

void CmdSweepReport(const SweepReportArgs& args) {
  if (args.entries.empty()) throw Error(ErrorCode::kConfigError, "no sweep entries given");
  if (args.out.empty()) throw Error(ErrorCode::kConfigError, "output path is not set");
  std::vector<SweepEntry> entries;
  std::string material = "sweep condition=" + args.condition + "\n";
  for (const auto& [p, path] : args.entries) {
    RequireFile(path, "report");
    entries.push_back({p, ReadReportJsonl(path)});
    material += FormatDouble(p) + " " + entries.back().report.config_digest + "\n";
  }
  WriteText(args.out, SerializeSweepCsv(entries, args.condition, Sha256Hex(material)));
}

}  // namespace snrbench
