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

#ifndef SNRBENCH_SNR_H_
#define SNRBENCH_SNR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "snrbench/audio_buffer.h"

namespace snrbench {

/// Signal-to-noise ratio in decibels.
struct SnrDb {
  double value = 0.0;
  friend auto operator<=>(const SnrDb&, const SnrDb&) = default;
};

/// Benchmark grid, near-clean to very noisy.
inline constexpr std::array<double, 9> kBenchmarkSnrGridDb = {
    35.0, 30.0, 25.0, 20.0, 15.0, 10.0, 5.0, 0.0, -5.0};

bool IsOnBenchmarkGrid(SnrDb snr);

struct MixResult {
  AudioBuffer mixed;
  double noise_gain = 1.0;      // linear amplitude factor applied to the noise
  double achieved_snr_db = 0.0;
  double peak_rescale = 1.0;    // 1.0 unless the clipping guard fired
};

/// (1/N) * sum x_i^2. Returns 0 for an empty buffer.
double MeanPower(const AudioBuffer& buffer);
double MeanPower(std::span<const double> samples);

/// Gain g with 10*log10(P_speech / P_{g*noise}) == target. Both inputs must
/// have equal length and non-zero power (SilentInput otherwise).
double NoiseGainForSnr(const AudioBuffer& speech, const AudioBuffer& noise,
                       SnrDb target);

/// 10*log10(P_speech / P_noise). Throws SilentInput if either power is 0.
SnrDb MeasureSnr(const AudioBuffer& speech, const AudioBuffer& scaled_noise);

/// Fits a noise clip to target_len samples. Longer clips yield a contiguous
/// crop at an offset drawn from the stream keyed by offset_seed; shorter
/// clips are tiled end to end from sample 0 and truncated.
AudioBuffer CropOrTile(const AudioBuffer& noise, std::size_t target_len,
                       std::uint64_t offset_seed);

/// Mixes one or two noise clips into speech at the target SNR.
///
/// Each clip is first fitted to the speech length with CropOrTile (clip i
/// uses a seed derived from `seed` and i). Two clips are summed sample-wise
/// and the sum is treated as a single noise source, so the target SNR holds
/// against the summed noise. If any mixed sample exceeds 1 in magnitude the
/// whole mixture is divided by its peak; that scales speech and noise alike
/// and leaves the SNR unchanged. Noise must already be at the speech rate.
MixResult MixAtSnr(const AudioBuffer& speech, std::span<const AudioBuffer> noises,
                   SnrDb target, std::uint64_t seed);

}  // namespace snrbench

#endif  // SNRBENCH_SNR_H_
