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

#include "snrbench/condition_plan.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"

namespace snrbench {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

// Sub-stream tags; each kind of draw has its own stream per utterance so
// that adding a draw of one kind never shifts another.
constexpr std::string_view kGateStream = "gate";
constexpr std::string_view kNoiseStream = "noise";
constexpr std::string_view kSegmentStream = "segment";
constexpr std::string_view kCropStream = "crop";

KeyedStream StreamFor(std::uint64_t seed, std::string_view utt_id, std::string_view tag) {
  return KeyedStream(DeriveSeed(DeriveSeed(seed, utt_id), tag));
}

void ValidatePolicy(const SamplingPolicy& p) {
  auto check_prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " must be in [0, 1], got " + std::to_string(v));
    }
  };
  check_prob(p.p_noisy, "p_noisy");
  check_prob(p.p_two_noise, "p_two_noise");
  for (const auto& [split, v] : p.p_noisy_by_split) check_prob(v, "per-split p_noisy");
  if (p.snr_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "snr_grid is empty");
  for (double s : p.snr_grid) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "snr_grid has a non-finite value");
  }
  if (p.fixed_snr &&
      std::find(p.snr_grid.begin(), p.snr_grid.end(), *p.fixed_snr) == p.snr_grid.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixed SNR " + std::to_string(*p.fixed_snr) + " dB is not on the grid");
  }
  if (!(p.segment_len_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "segment length must be positive");
  }
}

std::vector<const NoiseClip*> EligibleNoises(const Manifest& m, const SamplingPolicy& p) {
  std::vector<const NoiseClip*> out;
  for (const auto& n : m.noises) {
    const std::string cat = n.category.ToString();
    if (std::find(p.excluded_categories.begin(), p.excluded_categories.end(), cat) ==
        p.excluded_categories.end()) {
      out.push_back(&n);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const NoiseClip* a, const NoiseClip* b) { return a->clip_id < b->clip_id; });
  return out;
}

std::vector<const TrialRecord*> SelectTrials(const Manifest& m, const SamplingPolicy& p) {
  std::vector<const TrialRecord*> out;
  for (const auto& t : m.trials) {
    if (p.splits.empty() ||
        std::find(p.splits.begin(), p.splits.end(), t.split) != p.splits.end()) {
      out.push_back(&t);
    }
  }
  return out;
}

bool AnyNoisyPossible(const SamplingPolicy& p, const std::vector<const TrialRecord*>& trials) {
  if (p.fixed_snr) return !trials.empty();
  for (const auto* t : trials) {
    if (p.PNoisyFor(t->split) > 0.0) return true;
  }
  return false;
}

ConditionAssignment Assign(const TrialRecord& t, const SamplingPolicy& p,
                           const std::vector<const NoiseClip*>& noises, int rate) {
  ConditionAssignment a;
  a.utt_id = t.utt_id;
  a.split = t.split;
  a.authenticity = t.authenticity;

  const std::uint64_t gate_seed = p.gate_seed.value_or(p.root_seed);
  KeyedStream gate = StreamFor(gate_seed, t.utt_id, kGateStream);
  const bool noisy = p.fixed_snr ? true : gate.NextBernoulli(p.PNoisyFor(t.split));

  KeyedStream seg = StreamFor(p.root_seed, t.utt_id, kSegmentStream);
  const auto total = static_cast<std::uint64_t>(std::llround(t.duration_s * rate));
  const auto seg_len = static_cast<std::uint64_t>(std::llround(p.segment_len_s * rate));
  const std::uint64_t start = total > seg_len ? seg.NextBelow(total - seg_len + 1) : 0;
  a.segment = {static_cast<double>(start) / rate, p.segment_len_s};

  a.crop_offset_seed = StreamFor(p.root_seed, t.utt_id, kCropStream).NextU64();

  if (noisy) {
    KeyedStream draw = StreamFor(p.root_seed, t.utt_id, kNoiseStream);
    a.corruption = Corruption::kNoisy;
    const double snr = p.fixed_snr ? *p.fixed_snr : p.snr_grid[draw.NextBelow(p.snr_grid.size())];
    a.snr = SnrDb{snr};
    const std::uint64_t first = draw.NextBelow(noises.size());
    a.noise_ids.push_back(noises[first]->clip_id);
    if (draw.NextBernoulli(p.p_two_noise) && noises.size() > 1) {
      std::uint64_t second = draw.NextBelow(noises.size() - 1);
      if (second >= first) ++second;
      a.noise_ids.push_back(noises[second]->clip_id);
    }
  }
  a.four_class_label = EncodeFourClass(a.authenticity, a.corruption);
  return a;
}

ConditionPlan BuildPlan(const Manifest& manifest, const SamplingPolicy& policy) {
  ValidatePolicy(policy);
  ConditionPlan plan;
  plan.policy = policy;
  const auto trials = SelectTrials(manifest, policy);
  const auto noises = EligibleNoises(manifest, policy);
  if (noises.empty() && AnyNoisyPossible(policy, trials)) {
    throw Error(ErrorCode::kEmptyNoiseCatalog,
                manifest.noises.empty() ? "manifest has no noise clips"
                                        : "every noise clip is excluded by category");
  }
  plan.assignments.reserve(trials.size());
  for (const auto* t : trials) {
    plan.assignments.push_back(Assign(*t, policy, noises, manifest.header.canonical_rate_hz));
  }
  std::sort(plan.assignments.begin(), plan.assignments.end(),
            [](const auto& a, const auto& b) { return a.utt_id < b.utt_id; });
  return plan;
}

Json SplitMapToJson(const std::map<Split, double>& m) {
  Json j = Json::object();
  for (const auto& [k, v] : m) j[std::string(ToString(k))] = v;
  return j;
}

Json PolicyToJson(const SamplingPolicy& p) {
  Json j;
  j["p_noisy"] = p.p_noisy;
  j["p_noisy_by_split"] = SplitMapToJson(p.p_noisy_by_split);
  j["p_two_noise"] = p.p_two_noise;
  j["snr_grid"] = p.snr_grid;
  j["fixed_snr"] = p.fixed_snr ? Json(*p.fixed_snr) : Json(nullptr);
  j["root_seed"] = p.root_seed;
  j["gate_seed"] = p.gate_seed ? Json(*p.gate_seed) : Json(nullptr);
  j["segment_len_s"] = p.segment_len_s;
  Json splits = Json::array();
  for (Split s : p.splits) splits.push_back(ToString(s));
  j["splits"] = splits;
  j["excluded_categories"] = p.excluded_categories;
  return j;
}

[[noreturn]] void PlanError(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, "plan line " + std::to_string(line) + ": " + what);
}

SamplingPolicy PolicyFromJson(const Json& j, std::size_t line) {
  try {
    SamplingPolicy p;
    p.p_noisy = j.at("p_noisy").get<double>();
    for (const auto& [k, v] : j.at("p_noisy_by_split").items()) {
      const auto split = ParseSplit(k);
      if (!split) PlanError(line, "unknown split '" + k + "'");
      p.p_noisy_by_split[*split] = v.get<double>();
    }
    p.p_two_noise = j.at("p_two_noise").get<double>();
    p.snr_grid = j.at("snr_grid").get<std::vector<double>>();
    if (!j.at("fixed_snr").is_null()) p.fixed_snr = j.at("fixed_snr").get<double>();
    p.root_seed = j.at("root_seed").get<std::uint64_t>();
    if (!j.at("gate_seed").is_null()) p.gate_seed = j.at("gate_seed").get<std::uint64_t>();
    p.segment_len_s = j.at("segment_len_s").get<double>();
    for (const auto& s : j.at("splits")) {
      const auto split = ParseSplit(s.get<std::string>());
      if (!split) PlanError(line, "unknown split in policy");
      p.splits.push_back(*split);
    }
    p.excluded_categories = j.at("excluded_categories").get<std::vector<std::string>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    PlanError(line, std::string("bad policy: ") + e.what());
  }
}

Json AssignmentToJson(const ConditionAssignment& a) {
  Json j;
  j["kind"] = "assignment";
  j["utt_id"] = a.utt_id;
  j["split"] = ToString(a.split);
  j["authenticity"] = ToString(a.authenticity);
  j["corruption"] = ToString(a.corruption);
  j["noise_ids"] = a.noise_ids;
  j["snr_db"] = a.snr ? Json(a.snr->value) : Json(nullptr);
  j["crop_offset_seed"] = a.crop_offset_seed;
  j["segment_start_s"] = a.segment.start_s;
  j["segment_len_s"] = a.segment.len_s;
  j["four_class_label"] = static_cast<int>(a.four_class_label);
  return j;
}

ConditionAssignment AssignmentFromJson(const Json& j, std::size_t line) {
  try {
    ConditionAssignment a;
    a.utt_id = j.at("utt_id").get<std::string>();
    const auto split = ParseSplit(j.at("split").get<std::string>());
    const auto auth = ParseAuthenticity(j.at("authenticity").get<std::string>());
    const auto corr = ParseCorruption(j.at("corruption").get<std::string>());
    if (!split || !auth || !corr) PlanError(line, "bad split/authenticity/corruption");
    a.split = *split;
    a.authenticity = *auth;
    a.corruption = *corr;
    a.noise_ids = j.at("noise_ids").get<std::vector<std::string>>();
    if (!j.at("snr_db").is_null()) a.snr = SnrDb{j.at("snr_db").get<double>()};
    a.crop_offset_seed = j.at("crop_offset_seed").get<std::uint64_t>();
    a.segment = {j.at("segment_start_s").get<double>(), j.at("segment_len_s").get<double>()};
    const int label = j.at("four_class_label").get<int>();
    if (label < 0 || label > 3) PlanError(line, "four_class_label out of range");
    a.four_class_label = static_cast<FourClassLabel>(label);
    const bool clean = a.corruption == Corruption::kClean;
    if (clean != a.noise_ids.empty() || clean != !a.snr.has_value() ||
        a.noise_ids.size() > 2) {
      PlanError(line, "clean assignments carry no noise or SNR, noisy ones 1-2 clips and an SNR");
    }
    if (a.four_class_label != EncodeFourClass(a.authenticity, a.corruption)) {
      PlanError(line, "four_class_label inconsistent with authenticity and corruption");
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    PlanError(line, std::string("bad assignment: ") + e.what());
  }
}

}  // namespace

std::string_view ToString(Corruption c) { return c == Corruption::kClean ? "clean" : "noisy"; }

std::optional<Corruption> ParseCorruption(std::string_view s) {
  if (s == "clean") return Corruption::kClean;
  if (s == "noisy") return Corruption::kNoisy;
  return std::nullopt;
}

FourClassLabel EncodeFourClass(Authenticity a, Corruption c) {
  const int base = a == Authenticity::kBonafide ? 0 : 2;
  return static_cast<FourClassLabel>(base + (c == Corruption::kNoisy ? 1 : 0));
}

Authenticity AuthenticityOf(FourClassLabel label) {
  return static_cast<int>(label) < 2 ? Authenticity::kBonafide : Authenticity::kSpoof;
}

Corruption CorruptionOf(FourClassLabel label) {
  return static_cast<int>(label) % 2 == 1 ? Corruption::kNoisy : Corruption::kClean;
}

std::string_view ToString(FourClassLabel label) {
  switch (label) {
    case FourClassLabel::kRealClean: return "real_clean";
    case FourClassLabel::kRealNoisy: return "real_noisy";
    case FourClassLabel::kSpoofClean: return "spoof_clean";
    case FourClassLabel::kSpoofNoisy: return "spoof_noisy";
  }
  return "real_clean";
}

std::optional<FourClassLabel> ParseFourClassLabel(std::string_view s) {
  for (int i = 0; i < 4; ++i) {
    const auto label = static_cast<FourClassLabel>(i);
    if (s == ToString(label) || s == std::to_string(i)) return label;
  }
  return std::nullopt;
}

double SamplingPolicy::PNoisyFor(Split split) const {
  auto it = p_noisy_by_split.find(split);
  return it != p_noisy_by_split.end() ? it->second : p_noisy;
}

ClassCounts ConditionPlan::Counts() const {
  ClassCounts c;
  for (const auto& a : assignments) {
    (a.authenticity == Authenticity::kBonafide ? c.bonafide : c.spoof)++;
    (a.corruption == Corruption::kClean ? c.clean : c.noisy)++;
    c.four_class[static_cast<std::size_t>(a.four_class_label)]++;
  }
  return c;
}

double ConditionPlan::NoisyFraction() const {
  if (assignments.empty()) return 0.0;
  return static_cast<double>(Counts().noisy) / static_cast<double>(assignments.size());
}

ConditionPlan PlanMulticondition(const Manifest& manifest, const SamplingPolicy& policy) {
  SamplingPolicy p = policy;
  p.fixed_snr.reset();
  return BuildPlan(manifest, p);
}

ConditionPlan PlanFixedSnr(const Manifest& manifest, SnrDb snr, const SamplingPolicy& policy) {
  SamplingPolicy p = policy;
  p.fixed_snr = snr.value;
  return BuildPlan(manifest, p);
}

ConditionPlan PlanMixedTest(const Manifest& manifest, const SamplingPolicy& policy) {
  SamplingPolicy p = policy;
  p.fixed_snr.reset();
  p.p_noisy_by_split = {{Split::kTest, kMixedTestNoisyFraction},
                        {Split::kDev, kMixedDevNoisyFraction}};
  p.splits = {Split::kTest, Split::kDev};
  if (manifest.TrialsInSplit(Split::kTest).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mixed test plan needs test trials");
  }
  std::vector<std::string> warnings;
  if (manifest.TrialsInSplit(Split::kDev).empty()) {
    warnings.push_back("dev split is empty; mixed plan covers test trials only");
    p.splits = {Split::kTest};
  }
  ConditionPlan plan = BuildPlan(manifest, p);
  plan.warnings = std::move(warnings);
  return plan;
}

std::vector<ConditionPlan> PlanPNoisySweep(const Manifest& manifest,
                                           const std::vector<double>& fractions,
                                           const SamplingPolicy& policy) {
  std::vector<ConditionPlan> plans;
  plans.reserve(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    SamplingPolicy p = policy;
    p.p_noisy = fractions[i];
    p.gate_seed = DeriveSeed(policy.root_seed, static_cast<std::uint64_t>(i));
    plans.push_back(PlanMulticondition(manifest, p));
  }
  return plans;
}

std::string PolicyToJsonString(const SamplingPolicy& policy) {
  return PolicyToJson(policy).dump();
}

std::string SerializePlan(const ConditionPlan& plan, std::string_view config_digest) {
  const ClassCounts c = plan.Counts();
  Json header;
  header["kind"] = "plan_header";
  header["config_digest"] = config_digest;
  header["policy"] = PolicyToJson(plan.policy);
  header["n_assignments"] = plan.assignments.size();
  Json counts;
  counts["bonafide"] = c.bonafide;
  counts["spoof"] = c.spoof;
  counts["clean"] = c.clean;
  counts["noisy"] = c.noisy;
  Json four = Json::object();
  for (int i = 0; i < 4; ++i) {
    four[std::string(ToString(static_cast<FourClassLabel>(i)))] = c.four_class[i];
  }
  counts["four_class"] = four;
  header["class_counts"] = counts;
  header["warnings"] = plan.warnings;

  std::string out = header.dump() + "\n";
  for (const auto& a : plan.assignments) out += AssignmentToJson(a).dump() + "\n";
  return out;
}

void WritePlan(const ConditionPlan& plan, const fs::path& path, std::string_view config_digest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out << SerializePlan(plan, config_digest);
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

ConditionPlan ReadPlan(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open plan " + path.string());
  ConditionPlan plan;
  bool have_header = false;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      PlanError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!have_header) {
      if (j.value("kind", "") != "plan_header") PlanError(line_no, "expected plan_header");
      plan.policy = PolicyFromJson(j.at("policy"), line_no);
      plan.warnings = j.value("warnings", std::vector<std::string>{});
      have_header = true;
    } else {
      plan.assignments.push_back(AssignmentFromJson(j, line_no));
    }
  }
  if (!have_header) PlanError(1, "missing plan_header");
  return plan;
}

}  // namespace snrbench
