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

#include "snrbench/snr.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"

namespace snrbench {
namespace {

void RequireSameLength(const AudioBuffer& a, const AudioBuffer& b,
                       const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": length mismatch " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
  }
}

}  // namespace

bool IsOnBenchmarkGrid(SnrDb snr) {
  return std::find(kBenchmarkSnrGridDb.begin(), kBenchmarkSnrGridDb.end(),
                   snr.value) != kBenchmarkSnrGridDb.end();
}

double MeanPower(std::span<const double> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (double x : samples) sum += x * x;
  return sum / static_cast<double>(samples.size());
}

double MeanPower(const AudioBuffer& buffer) { return MeanPower(buffer.samples()); }

double NoiseGainForSnr(const AudioBuffer& speech, const AudioBuffer& noise,
                       SnrDb target) {
  RequireSameLength(speech, noise, "NoiseGainForSnr");
  if (!std::isfinite(target.value)) {
    throw Error(ErrorCode::kInvalidArgument, "target SNR must be finite");
  }
  const double ps = MeanPower(speech);
  const double pn = MeanPower(noise);
  if (ps <= 0.0) throw Error(ErrorCode::kSilentInput, "speech has zero power");
  if (pn <= 0.0) throw Error(ErrorCode::kSilentInput, "noise has zero power");
  return std::sqrt(ps / (pn * std::pow(10.0, target.value / 10.0)));
}

SnrDb MeasureSnr(const AudioBuffer& speech, const AudioBuffer& scaled_noise) {
  RequireSameLength(speech, scaled_noise, "MeasureSnr");
  const double ps = MeanPower(speech);
  const double pn = MeanPower(scaled_noise);
  if (ps <= 0.0) throw Error(ErrorCode::kSilentInput, "speech has zero power");
  if (pn <= 0.0) throw Error(ErrorCode::kSilentInput, "noise has zero power");
  return SnrDb{10.0 * std::log10(ps / pn)};
}

AudioBuffer CropOrTile(const AudioBuffer& noise, std::size_t target_len,
                       std::uint64_t offset_seed) {
  if (noise.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "CropOrTile: empty noise clip");
  }
  const auto src = noise.samples();
  std::vector<double> out(target_len);
  if (src.size() >= target_len) {
    KeyedStream stream(offset_seed);
    const std::size_t offset = static_cast<std::size_t>(
        stream.NextBelow(src.size() - target_len + 1));
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(offset), target_len,
                out.begin());
  } else {
    for (std::size_t i = 0; i < target_len; ++i) out[i] = src[i % src.size()];
  }
  return AudioBuffer(std::move(out), noise.sample_rate());
}

MixResult MixAtSnr(const AudioBuffer& speech, std::span<const AudioBuffer> noises,
                   SnrDb target, std::uint64_t seed) {
  if (noises.empty() || noises.size() > 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "MixAtSnr takes one or two noise clips, got " +
                    std::to_string(noises.size()));
  }
  const std::size_t n = speech.size();
  std::vector<double> noise_sum(n, 0.0);
  for (std::size_t i = 0; i < noises.size(); ++i) {
    if (noises[i].sample_rate() != speech.sample_rate()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "noise rate " + std::to_string(noises[i].sample_rate()) +
                      " differs from speech rate " +
                      std::to_string(speech.sample_rate()));
    }
    const AudioBuffer fitted = CropOrTile(noises[i], n, DeriveSeed(seed, i));
    if (MeanPower(fitted) <= 0.0) {
      throw Error(ErrorCode::kSilentInput,
                  "noise clip " + std::to_string(i) + " is silent after cropping");
    }
    const auto s = fitted.samples();
    for (std::size_t k = 0; k < n; ++k) noise_sum[k] += s[k];
  }
  const AudioBuffer noise(std::move(noise_sum), speech.sample_rate());
  const double gain = NoiseGainForSnr(speech, noise, target);

  const auto s = speech.samples();
  const auto v = noise.samples();
  std::vector<double> mixed(n);
  double peak = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mixed[k] = s[k] + gain * v[k];
    peak = std::max(peak, std::abs(mixed[k]));
  }

  MixResult result;
  result.noise_gain = gain;
  // Dividing by the peak (rather than multiplying by its reciprocal) keeps
  // the largest sample at exactly 1.
  const double divisor = peak > 1.0 ? peak : 1.0;
  if (peak > 1.0) {
    result.peak_rescale = 1.0 / peak;
    for (double& x : mixed) x /= divisor;
  }

  // Measure on the components exactly as they appear in the output.
  std::vector<double> speech_part(n), noise_part(n);
  for (std::size_t k = 0; k < n; ++k) {
    speech_part[k] = s[k] / divisor;
    noise_part[k] = gain * v[k] / divisor;
  }
  result.achieved_snr_db =
      MeasureSnr(AudioBuffer(std::move(speech_part), speech.sample_rate()),
                 AudioBuffer(std::move(noise_part), speech.sample_rate()))
          .value;
  result.mixed = AudioBuffer(std::move(mixed), speech.sample_rate());
  return result;
}

}  // namespace snrbench
