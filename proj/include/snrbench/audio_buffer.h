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

#ifndef SNRBENCH_AUDIO_BUFFER_H_
#define SNRBENCH_AUDIO_BUFFER_H_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace snrbench {

/// Sample rate every pipeline stage works at; noise is resampled to it.
inline constexpr int kCanonicalRateHz = 16000;

/// Mono waveform plus its sample rate. Samples are nominally in [-1, 1] and
/// always finite; the buffer cannot be modified after construction.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  /// Throws Error(kInvalidArgument) on a non-positive rate or a non-finite
  /// sample.
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  /// Moves the samples out, leaving this buffer empty.
  std::vector<double> release() && { return std::move(samples_); }

  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = kCanonicalRateHz;
};

}  // namespace snrbench

#endif  // SNRBENCH_AUDIO_BUFFER_H_
