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

#ifndef SNRBENCH_RENDER_H_
#define SNRBENCH_RENDER_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "snrbench/audio_buffer.h"
#include "snrbench/condition_plan.h"
#include "snrbench/manifest.h"
#include "snrbench/wav_io.h"

namespace snrbench {

/// One line of a rendered split's sidecar.
struct LabelRecord {
  std::string utt_id;
  Split split = Split::kTrain;
  Authenticity authenticity = Authenticity::kBonafide;
  Corruption corruption = Corruption::kClean;
  FourClassLabel four_class_label = FourClassLabel::kRealClean;
  std::optional<double> snr_db;           // unset = "clean"
  std::optional<double> achieved_snr_db;  // unset for clean trials
  double peak_rescale = 1.0;
  std::vector<std::string> noise_ids;
  double segment_start_s = 0.0;

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

struct SkipRecord {
  std::string utt_id;
  std::string reason;
};

/// Decoded noise clips at the canonical rate, keyed by clip_id.
using NoiseBank = std::map<std::string, AudioBuffer, std::less<>>;

/// Loads and resamples every clip referenced by the plan.
NoiseBank LoadNoiseBank(const ConditionPlan& plan, const Manifest& manifest, int jobs = 1);

struct RenderedTrial {
  AudioBuffer audio;
  LabelRecord label;
};

/// Renders one assignment in memory: decode, resample to the manifest rate,
/// cut the segment (zero-padding past the end of the utterance), then mix
/// when noisy. Clean output is the cut segment unchanged. Throws
/// SilentInput for a silent segment or noise.
RenderedTrial RenderAssignment(const ConditionAssignment& assignment,
                               const TrialRecord& trial, int canonical_rate,
                               const NoiseBank& noises);

struct RenderOptions {
  std::filesystem::path out_dir;
  WavBitDepth bit_depth = WavBitDepth::kFloat32;
  int jobs = 1;
  std::string config_digest;
};

struct RenderSummary {
  std::size_t rendered = 0;
  std::vector<SkipRecord> skipped;
};

/// Writes out_dir/audio/<utt_id>.wav for each rendered trial plus
/// labels.jsonl (sorted by utt_id), skipped.jsonl and plan.jsonl. Trials
/// that raise SilentInput are listed in skipped.jsonl with the reason;
/// every other error propagates.
RenderSummary Materialize(const ConditionPlan& plan, const Manifest& manifest,
                          const RenderOptions& options);

inline constexpr const char* kLabelsFile = "labels.jsonl";
inline constexpr const char* kSkippedFile = "skipped.jsonl";
inline constexpr const char* kPlanFile = "plan.jsonl";
inline constexpr const char* kAudioDir = "audio";

std::vector<LabelRecord> ReadLabels(const std::filesystem::path& labels_path);
std::filesystem::path RenderedAudioPath(const std::filesystem::path& split_dir,
                                        const std::string& utt_id);

}  // namespace snrbench

#endif  // SNRBENCH_RENDER_H_
