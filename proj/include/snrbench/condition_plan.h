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

#ifndef SNRBENCH_CONDITION_PLAN_H_
#define SNRBENCH_CONDITION_PLAN_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snrbench/manifest.h"
#include "snrbench/snr.h"

namespace snrbench {

enum class Corruption { kClean, kNoisy };

std::string_view ToString(Corruption c);
std::optional<Corruption> ParseCorruption(std::string_view s);

/// Joint authenticity x corruption label with a fixed integer encoding.
enum class FourClassLabel : int {
  kRealClean = 0,
  kRealNoisy = 1,
  kSpoofClean = 2,
  kSpoofNoisy = 3,
};

FourClassLabel EncodeFourClass(Authenticity a, Corruption c);
Authenticity AuthenticityOf(FourClassLabel label);
Corruption CorruptionOf(FourClassLabel label);
std::string_view ToString(FourClassLabel label);
std::optional<FourClassLabel> ParseFourClassLabel(std::string_view s);

struct Segment {
  double start_s = 0.0;
  double len_s = 2.0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Corruption recipe for a single utterance. noise_ids is empty and snr is
/// unset exactly when the assignment is clean.
struct ConditionAssignment {
  std::string utt_id;
  Split split = Split::kTrain;
  Authenticity authenticity = Authenticity::kBonafide;
  Corruption corruption = Corruption::kClean;
  std::vector<std::string> noise_ids;
  std::optional<SnrDb> snr;
  std::uint64_t crop_offset_seed = 0;
  Segment segment;
  FourClassLabel four_class_label = FourClassLabel::kRealClean;

  friend bool operator==(const ConditionAssignment&, const ConditionAssignment&) = default;
};

struct SamplingPolicy {
  double p_noisy = 0.5;
  // Per-split overrides of p_noisy (the mixed test plan uses test 0.8, dev 0.2).
  std::map<Split, double> p_noisy_by_split;
  double p_two_noise = 0.1;
  std::vector<double> snr_grid{kBenchmarkSnrGridDb.begin(), kBenchmarkSnrGridDb.end()};
  std::optional<double> fixed_snr;
  std::uint64_t root_seed = 0;
  // Seed for the clean/noisy gate only; defaults to root_seed. Sweeps give
  // each fraction its own gate seed while sharing every other draw.
  std::optional<std::uint64_t> gate_seed;
  double segment_len_s = 2.0;
  // Splits to plan; empty means every trial in the manifest.
  std::vector<Split> splits;
  // Noise categories (NoiseCategory::ToString form) never drawn.
  std::vector<std::string> excluded_categories;

  double PNoisyFor(Split split) const;

  friend bool operator==(const SamplingPolicy&, const SamplingPolicy&) = default;
};

struct ClassCounts {
  std::size_t bonafide = 0;
  std::size_t spoof = 0;
  std::size_t clean = 0;
  std::size_t noisy = 0;
  std::array<std::size_t, 4> four_class{};
};

struct ConditionPlan {
  SamplingPolicy policy;
  // Sorted by utt_id.
  std::vector<ConditionAssignment> assignments;
  std::vector<std::string> warnings;

  ClassCounts Counts() const;
  double NoisyFraction() const;
};

/// Per trial: Bernoulli(p_noisy) picks the corruption; a noisy trial draws
/// its SNR uniformly from the grid, one clip uniformly from the (filtered,
/// clip_id-sorted) catalog and, with probability p_two_noise, a second
/// distinct clip. The segment start is uniform over whole-sample offsets
/// that keep the segment inside the utterance (0 if it is shorter). Every
/// draw comes from a counter-based stream keyed on (seed, utt_id).
ConditionPlan PlanMulticondition(const Manifest& manifest, const SamplingPolicy& policy);

/// Every selected trial noisy at exactly `snr`, which must be on the
/// policy grid. Noise and crop draws are keyed as in PlanMulticondition.
ConditionPlan PlanFixedSnr(const Manifest& manifest, SnrDb snr,
                           const SamplingPolicy& policy);

/// Test trials noisy with probability 0.8, dev trials with 0.2; other
/// policy fields are honored. An empty dev split only produces a warning.
ConditionPlan PlanMixedTest(const Manifest& manifest, const SamplingPolicy& policy);

inline constexpr double kMixedTestNoisyFraction = 0.8;
inline constexpr double kMixedDevNoisyFraction = 0.2;

/// One multicondition plan per fraction. Plan i gates with a seed derived
/// from (root_seed, i); all other draws share root_seed.
std::vector<ConditionPlan> PlanPNoisySweep(const Manifest& manifest,
                                           const std::vector<double>& fractions,
                                           const SamplingPolicy& policy);

/// JSON lines: a plan header (policy, class counts, config digest) followed
/// by one assignment per line.
std::string SerializePlan(const ConditionPlan& plan, std::string_view config_digest);
void WritePlan(const ConditionPlan& plan, const std::filesystem::path& path,
               std::string_view config_digest);
ConditionPlan ReadPlan(const std::filesystem::path& path);

std::string PolicyToJsonString(const SamplingPolicy& policy);

}  // namespace snrbench

#endif  // SNRBENCH_CONDITION_PLAN_H_
