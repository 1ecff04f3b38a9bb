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

#include "snrbench/render.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "snrbench/error.h"
#include "snrbench/parallel.h"
#include "snrbench/resample.h"
#include "snrbench/snr.h"

namespace snrbench {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

void RequireSafeId(const std::string& id) {
  if (id.empty() || id.find('/') != std::string::npos ||
      id.find('\\') != std::string::npos || id == "." || id == "..") {
    throw Error(ErrorCode::kInvalidArgument,
                "utterance id '" + id + "' cannot be used as a file name");
  }
}

AudioBuffer CutSegment(const AudioBuffer& audio, const Segment& segment) {
  const int rate = audio.sample_rate();
  const auto start = static_cast<std::size_t>(std::llround(segment.start_s * rate));
  const auto len = static_cast<std::size_t>(std::llround(segment.len_s * rate));
  const auto src = audio.samples();
  std::vector<double> out(len, 0.0);
  for (std::size_t i = 0; i < len && start + i < src.size(); ++i) out[i] = src[start + i];
  return AudioBuffer(std::move(out), rate);
}

Json LabelToJson(const LabelRecord& r) {
  Json j;
  j["kind"] = "label";
  j["utt_id"] = r.utt_id;
  j["split"] = ToString(r.split);
  j["authenticity"] = ToString(r.authenticity);
  j["corruption"] = ToString(r.corruption);
  j["four_class_label"] = static_cast<int>(r.four_class_label);
  j["snr_db"] = r.snr_db ? Json(*r.snr_db) : Json("clean");
  j["achieved_snr_db"] = r.achieved_snr_db ? Json(*r.achieved_snr_db) : Json(nullptr);
  j["peak_rescale"] = r.peak_rescale;
  j["noise_ids"] = r.noise_ids;
  j["segment_start_s"] = r.segment_start_s;
  return j;
}

[[noreturn]] void LabelError(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, "labels line " + std::to_string(line) + ": " + what);
}

LabelRecord LabelFromJson(const Json& j, std::size_t line) {
  try {
    LabelRecord r;
    r.utt_id = j.at("utt_id").get<std::string>();
    const auto split = ParseSplit(j.at("split").get<std::string>());
    const auto auth = ParseAuthenticity(j.at("authenticity").get<std::string>());
    const auto corr = ParseCorruption(j.at("corruption").get<std::string>());
    if (!split || !auth || !corr) LabelError(line, "bad split/authenticity/corruption");
    r.split = *split;
    r.authenticity = *auth;
    r.corruption = *corr;
    const int label = j.at("four_class_label").get<int>();
    if (label < 0 || label > 3) LabelError(line, "four_class_label out of range");
    r.four_class_label = static_cast<FourClassLabel>(label);
    const Json& snr = j.at("snr_db");
    if (snr.is_string()) {
      if (snr.get<std::string>() != "clean") LabelError(line, "snr_db must be a number or \"clean\"");
    } else {
      r.snr_db = snr.get<double>();
    }
    if (!j.at("achieved_snr_db").is_null()) r.achieved_snr_db = j.at("achieved_snr_db").get<double>();
    r.peak_rescale = j.at("peak_rescale").get<double>();
    r.noise_ids = j.at("noise_ids").get<std::vector<std::string>>();
    r.segment_start_s = j.at("segment_start_s").get<double>();
    if (r.four_class_label != EncodeFourClass(r.authenticity, r.corruption)) {
      LabelError(line, "four_class_label inconsistent with authenticity and corruption");
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    LabelError(line, e.what());
  }
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

}  // namespace

NoiseBank LoadNoiseBank(const ConditionPlan& plan, const Manifest& manifest, int jobs) {
  std::set<std::string, std::less<>> wanted;
  for (const auto& a : plan.assignments) wanted.insert(a.noise_ids.begin(), a.noise_ids.end());
  std::vector<const NoiseClip*> clips;
  for (const auto& n : manifest.noises) {
    if (wanted.count(n.clip_id)) clips.push_back(&n);
  }
  if (clips.size() != wanted.size()) {
    for (const auto& id : wanted) {
      if (std::none_of(clips.begin(), clips.end(),
                       [&](const NoiseClip* c) { return c->clip_id == id; })) {
        throw Error(ErrorCode::kSchemaViolation, "plan references unknown noise clip '" + id + "'");
      }
    }
  }
  std::vector<AudioBuffer> loaded(clips.size());
  const int rate = manifest.header.canonical_rate_hz;
  ParallelFor(clips.size(), jobs, [&](std::size_t i) {
    loaded[i] = Resample(DecodeWav(clips[i]->audio_path), rate);
  });
  NoiseBank bank;
  for (std::size_t i = 0; i < clips.size(); ++i) bank.emplace(clips[i]->clip_id, std::move(loaded[i]));
  return bank;
}

RenderedTrial RenderAssignment(const ConditionAssignment& a, const TrialRecord& trial,
                               int canonical_rate, const NoiseBank& noises) {
  const AudioBuffer speech =
      CutSegment(Resample(DecodeWav(trial.audio_path), canonical_rate), a.segment);
  if (MeanPower(speech) <= 0.0) {
    throw Error(ErrorCode::kSilentInput, "speech segment of '" + a.utt_id + "' is silent");
  }

  RenderedTrial out;
  LabelRecord& r = out.label;
  r.utt_id = a.utt_id;
  r.split = a.split;
  r.authenticity = a.authenticity;
  r.corruption = a.corruption;
  r.four_class_label = a.four_class_label;
  r.noise_ids = a.noise_ids;
  r.segment_start_s = a.segment.start_s;

  if (a.corruption == Corruption::kClean) {
    out.audio = speech;
    return out;
  }
  std::vector<AudioBuffer> clips;
  for (const auto& id : a.noise_ids) {
    auto n = noises.find(id);
    if (n == noises.end()) {
      throw Error(ErrorCode::kInvalidArgument, "noise clip '" + id + "' not loaded");
    }
    clips.push_back(n->second);
  }
  MixResult mix = MixAtSnr(speech, clips, *a.snr, a.crop_offset_seed);
  r.snr_db = a.snr->value;
  r.achieved_snr_db = mix.achieved_snr_db;
  r.peak_rescale = mix.peak_rescale;
  out.audio = std::move(mix.mixed);
  return out;
}

fs::path RenderedAudioPath(const fs::path& split_dir, const std::string& utt_id) {
  return split_dir / kAudioDir / (utt_id + ".wav");
}

RenderSummary Materialize(const ConditionPlan& plan, const Manifest& manifest,
                          const RenderOptions& options) {
  std::map<std::string_view, const TrialRecord*> trials;
  for (const auto& t : manifest.trials) trials.emplace(t.utt_id, &t);
  for (const auto& a : plan.assignments) {
    RequireSafeId(a.utt_id);
    if (!trials.count(a.utt_id)) {
      throw Error(ErrorCode::kSchemaViolation,
                  "plan references unknown utterance '" + a.utt_id + "'");
    }
  }
  fs::create_directories(options.out_dir / kAudioDir);
  const NoiseBank noises = LoadNoiseBank(plan, manifest, options.jobs);

  const std::size_t n = plan.assignments.size();
  std::vector<std::optional<LabelRecord>> labels(n);
  std::vector<std::string> skip_reasons(n);
  ParallelFor(n, options.jobs, [&](std::size_t i) {
    const auto& a = plan.assignments[i];
    try {
      RenderedTrial t = RenderAssignment(a, *trials.at(a.utt_id),
                                         manifest.header.canonical_rate_hz, noises);
      EncodeWav(t.audio, RenderedAudioPath(options.out_dir, a.utt_id), options.bit_depth);
      labels[i] = std::move(t.label);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSilentInput) throw;
      skip_reasons[i] = e.what();
    }
  });

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return plan.assignments[x].utt_id < plan.assignments[y].utt_id;
  });

  RenderSummary summary;
  std::string label_lines, skip_lines;
  for (std::size_t i : order) {
    if (labels[i]) {
      ++summary.rendered;
      label_lines += LabelToJson(*labels[i]).dump() + "\n";
    } else {
      summary.skipped.push_back({plan.assignments[i].utt_id, skip_reasons[i]});
      Json s;
      s["kind"] = "skip";
      s["utt_id"] = plan.assignments[i].utt_id;
      s["reason"] = skip_reasons[i];
      skip_lines += s.dump() + "\n";
    }
  }

  Json header;
  header["kind"] = "labels_header";
  header["config_digest"] = options.config_digest;
  header["canonical_rate_hz"] = manifest.header.canonical_rate_hz;
  header["segment_len_s"] = plan.policy.segment_len_s;
  header["n_rendered"] = summary.rendered;
  header["n_skipped"] = summary.skipped.size();
  WriteText(options.out_dir / kLabelsFile, header.dump() + "\n" + label_lines);

  Json skip_header;
  skip_header["kind"] = "skipped_header";
  skip_header["config_digest"] = options.config_digest;
  skip_header["n_skipped"] = summary.skipped.size();
  WriteText(options.out_dir / kSkippedFile, skip_header.dump() + "\n" + skip_lines);

  WritePlan(plan, options.out_dir / kPlanFile, options.config_digest);
  return summary;
}

std::vector<LabelRecord> ReadLabels(const fs::path& labels_path) {
  std::ifstream in(labels_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + labels_path.string());
  std::vector<LabelRecord> out;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      LabelError(line_no, std::string("invalid JSON: ") + e.what());
    }
    const std::string kind = j.value("kind", "");
    if (kind == "labels_header") continue;
    if (kind != "label") LabelError(line_no, "unknown record kind '" + kind + "'");
    out.push_back(LabelFromJson(j, line_no));
  }
  return out;
}

}  // namespace snrbench
