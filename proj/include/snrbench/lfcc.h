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

#ifndef SNRBENCH_LFCC_H_
#define SNRBENCH_LFCC_H_

#include <cstddef>
#include <span>
#include <vector>

#include "snrbench/audio_buffer.h"

namespace snrbench {

struct LfccConfig {
  int sample_rate = kCanonicalRateHz;
  double frame_len_ms = 25.0;
  double frame_hop_ms = 10.0;
  int fft_size = 512;
  int n_filters = 20;
  int n_ceps = 20;  // c0 included
  bool include_deltas = false;
  double preemphasis = 0.97;
  double log_floor = 1e-10;

  int FrameLength() const;  // samples
  int FrameHop() const;     // samples
  /// Throws InvalidArgument unless fft_size is a power of two covering a
  /// frame and n_ceps <= n_filters.
  void Validate() const;
};

/// Row-major frames x dims matrix.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t frames, std::size_t dims)
      : frames_(frames), dims_(dims), data_(frames * dims, 0.0) {}

  std::size_t frames() const { return frames_; }
  std::size_t dims() const { return dims_; }
  double& at(std::size_t f, std::size_t d) { return data_[f * dims_ + d]; }
  double at(std::size_t f, std::size_t d) const { return data_[f * dims_ + d]; }
  std::span<const double> row(std::size_t f) const {
    return std::span<const double>(data_).subspan(f * dims_, dims_);
  }

  /// Per-dimension mean followed by per-dimension (population) standard
  /// deviation; 2 * dims values.
  std::vector<double> Summary() const;

 private:
  std::size_t frames_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> data_;
};

/// Triangular filters with n_filters + 2 equally spaced edge frequencies on
/// [0, Nyquist]; filter i rises from edge i to a peak of 1 at edge i+1 and
/// falls to 0 at edge i+2.
class LinearFilterbank {
 public:
  explicit LinearFilterbank(const LfccConfig& cfg);

  int size() const { return static_cast<int>(centers_hz_.size()); }
  const std::vector<double>& centers_hz() const { return centers_hz_; }
  /// Response of filter i at an arbitrary frequency.
  double Weight(int i, double freq_hz) const;
  /// Filter energies from a one-sided power spectrum of fft_size/2+1 bins.
  std::vector<double> Apply(std::span<const double> power) const;

 private:
  std::vector<double> edges_hz_;
  std::vector<double> centers_hz_;
  std::vector<double> bin_freqs_hz_;
};

/// Frame count for n samples: 1 + floor((n - frame_len) / hop), or 0 when
/// n < frame_len.
std::size_t LfccFrameCount(std::size_t n_samples, const LfccConfig& cfg);

/// Per frame: pre-emphasis, Hamming window, |DFT|^2, linear filterbank.
/// Returns frames x n_filters energies before the log.
FeatureMatrix FilterbankEnergies(const AudioBuffer& buffer, const LfccConfig& cfg);

/// Full LFCC: the energies above, then log with a floor and an orthonormal
/// DCT-II truncated to n_ceps; optional first-order deltas double the width.
/// Throws TooShort if the buffer holds less than one frame.
FeatureMatrix ExtractLfcc(const AudioBuffer& buffer, const LfccConfig& cfg);

/// Orthonormal DCT-II of x, and its inverse (the transpose).
std::vector<double> DctOrthonormal(std::span<const double> x);
std::vector<double> InverseDctOrthonormal(std::span<const double> c);

}  // namespace snrbench

#endif  // SNRBENCH_LFCC_H_
