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

#ifndef SNRBENCH_SYNTHETIC_CORPUS_H_
#define SNRBENCH_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>

#include "snrbench/audio_buffer.h"
#include "snrbench/manifest.h"

namespace snrbench {

// Deterministic stand-ins for a speech corpus and an ambient noise corpus,
// small enough to render and score on a laptop.
//
// Bonafide utterances are vibrato harmonic tones with syllable-rate
// amplitude modulation and a faint breath-noise floor above 4 kHz. Spoof
// utterances share the carrier but are band-limited and ring-modulated
// with no breath floor, so the cue separating the classes sits in the
// upper half of the spectrum where broadband noise also lands.

AudioBuffer SynthesizeUtterance(Authenticity authenticity, std::uint64_t seed, double duration_s,
                                int sample_rate = kCanonicalRateHz);

AudioBuffer SynthesizeNoise(NoiseCategoryKind category, std::uint64_t seed, double duration_s,
                            int sample_rate = kCanonicalRateHz);

struct FixtureOptions {
  std::filesystem::path root;
  std::uint64_t seed = 1;
  // Utterances per class in each split.
  int train_per_class = 40;
  int dev_per_class = 10;
  int test_per_class = 40;
  int noise_clips_per_category = 4;
  // Share of utterances drawn shorter than two seconds.
  double short_fraction = 0.15;
  // Share of speech files stored at 22.05 kHz instead of 16 kHz.
  double off_rate_fraction = 0.1;
};

struct FixtureLayout {
  std::filesystem::path speech_root;
  std::filesystem::path noise_root;
  std::map<Split, std::filesystem::path> protocols;
};

/// Writes root/speech/*.wav (16-bit PCM), root/noise/<Category>/*.wav
/// (float), and root/protocols/<split>.txt in the five-column
/// "speaker utt_id - system label" layout.
FixtureLayout WriteFixtureCorpus(const FixtureOptions& options);

}  // namespace snrbench

#endif  // SNRBENCH_SYNTHETIC_CORPUS_H_
