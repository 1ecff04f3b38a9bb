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

#include "snrbench/lfcc.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "snrbench/error.h"

namespace snrbench {
namespace {

// FFTW's planner is not thread-safe; plans are created once per size under
// this lock and then only used through the thread-safe new-array execute.
std::mutex g_plan_mutex;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

fftw_plan PlanFor(int n) {
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = plans.find(n);
  if (it != plans.end()) return it->second;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(n)));
  std::unique_ptr<fftw_complex, FftwFree> out(
      fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1)));
  // FFTW_ESTIMATE picks the algorithm without timing, so results are the
  // same on every run.
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.get(), out.get(), FFTW_ESTIMATE);
  plans.emplace(n, plan);
  return plan;
}

bool IsPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

int LfccConfig::FrameLength() const {
  return static_cast<int>(std::lround(frame_len_ms * sample_rate / 1000.0));
}

int LfccConfig::FrameHop() const {
  return static_cast<int>(std::lround(frame_hop_ms * sample_rate / 1000.0));
}

void LfccConfig::Validate() const {
  if (sample_rate <= 0 || FrameLength() <= 0 || FrameHop() <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "LFCC frame length and hop must be positive");
  }
  if (!IsPowerOfTwo(fft_size) || fft_size < FrameLength()) {
    throw Error(ErrorCode::kInvalidArgument,
                "fft_size " + std::to_string(fft_size) +
                    " must be a power of two >= frame length " + std::to_string(FrameLength()));
  }
  if (n_filters <= 0 || n_ceps <= 0 || n_ceps > n_filters) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < n_ceps <= n_filters");
  }
  if (!(log_floor > 0.0)) throw Error(ErrorCode::kInvalidArgument, "log_floor must be positive");
}

std::vector<double> FeatureMatrix::Summary() const {
  std::vector<double> out(2 * dims_, 0.0);
  if (frames_ == 0) return out;
  for (std::size_t d = 0; d < dims_; ++d) {
    double mean = 0.0;
    for (std::size_t f = 0; f < frames_; ++f) mean += at(f, d);
    mean /= static_cast<double>(frames_);
    double var = 0.0;
    for (std::size_t f = 0; f < frames_; ++f) {
      const double dev = at(f, d) - mean;
      var += dev * dev;
    }
    out[d] = mean;
    out[dims_ + d] = std::sqrt(var / static_cast<double>(frames_));
  }
  return out;
}

LinearFilterbank::LinearFilterbank(const LfccConfig& cfg) {
  const double nyquist = cfg.sample_rate / 2.0;
  const int n = cfg.n_filters;
  edges_hz_.resize(static_cast<std::size_t>(n + 2));
  for (int i = 0; i < n + 2; ++i) edges_hz_[static_cast<std::size_t>(i)] = nyquist * i / (n + 1);
  centers_hz_.assign(edges_hz_.begin() + 1, edges_hz_.end() - 1);
  const int bins = cfg.fft_size / 2 + 1;
  bin_freqs_hz_.resize(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    bin_freqs_hz_[static_cast<std::size_t>(k)] =
        static_cast<double>(k) * cfg.sample_rate / cfg.fft_size;
  }
}

double LinearFilterbank::Weight(int i, double f) const {
  const double lo = edges_hz_[static_cast<std::size_t>(i)];
  const double mid = edges_hz_[static_cast<std::size_t>(i + 1)];
  const double hi = edges_hz_[static_cast<std::size_t>(i + 2)];
  if (f <= lo || f >= hi) return 0.0;
  return f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
}

std::vector<double> LinearFilterbank::Apply(std::span<const double> power) const {
  std::vector<double> out(centers_hz_.size(), 0.0);
  for (int i = 0; i < size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) acc += Weight(i, bin_freqs_hz_[k]) * power[k];
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

std::size_t LfccFrameCount(std::size_t n, const LfccConfig& cfg) {
  const auto len = static_cast<std::size_t>(cfg.FrameLength());
  const auto hop = static_cast<std::size_t>(cfg.FrameHop());
  return n < len ? 0 : 1 + (n - len) / hop;
}

FeatureMatrix FilterbankEnergies(const AudioBuffer& buffer, const LfccConfig& cfg) {
  cfg.Validate();
  if (buffer.sample_rate() != cfg.sample_rate) {
    throw Error(ErrorCode::kInvalidArgument,
                "buffer rate " + std::to_string(buffer.sample_rate()) +
                    " differs from LFCC rate " + std::to_string(cfg.sample_rate));
  }
  const std::size_t frames = LfccFrameCount(buffer.size(), cfg);
  if (frames == 0) {
    throw Error(ErrorCode::kTooShort, std::to_string(buffer.size()) +
                                          " samples is shorter than one frame of " +
                                          std::to_string(cfg.FrameLength()));
  }

  const auto x = buffer.samples();
  std::vector<double> emphasized(x.size());
  emphasized[0] = x[0];
  for (std::size_t i = 1; i < x.size(); ++i) emphasized[i] = x[i] - cfg.preemphasis * x[i - 1];

  const int len = cfg.FrameLength();
  const int hop = cfg.FrameHop();
  std::vector<double> window(static_cast<std::size_t>(len));
  for (int n = 0; n < len; ++n) {
    window[static_cast<std::size_t>(n)] =
        len == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
  }

  const LinearFilterbank bank(cfg);
  const int bins = cfg.fft_size / 2 + 1;
  fftw_plan plan = PlanFor(cfg.fft_size);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(cfg.fft_size)));
  std::unique_ptr<fftw_complex, FftwFree> spec(fftw_alloc_complex(static_cast<std::size_t>(bins)));
  std::vector<double> power(static_cast<std::size_t>(bins));

  FeatureMatrix energies(frames, static_cast<std::size_t>(cfg.n_filters));
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * static_cast<std::size_t>(hop);
    std::fill(in.get(), in.get() + cfg.fft_size, 0.0);
    for (int n = 0; n < len; ++n) {
      in.get()[n] = emphasized[start + static_cast<std::size_t>(n)] * window[static_cast<std::size_t>(n)];
    }
    fftw_execute_dft_r2c(plan, in.get(), spec.get());
    for (int k = 0; k < bins; ++k) {
      const double re = spec.get()[k][0];
      const double im = spec.get()[k][1];
      power[static_cast<std::size_t>(k)] = re * re + im * im;
    }
    const auto e = bank.Apply(power);
    for (std::size_t i = 0; i < e.size(); ++i) energies.at(f, i) = e[i];
  }
  return energies;
}

std::vector<double> DctOrthonormal(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += x[i] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * i + 1.0) /
                             (2.0 * static_cast<double>(n)));
    }
    c[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return c;
}

std::vector<double> InverseDctOrthonormal(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      acc += c[k] * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n)) *
             std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * i + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    x[i] = acc;
  }
  return x;
}

FeatureMatrix ExtractLfcc(const AudioBuffer& buffer, const LfccConfig& cfg) {
  const FeatureMatrix energies = FilterbankEnergies(buffer, cfg);
  const std::size_t frames = energies.frames();
  const auto n_ceps = static_cast<std::size_t>(cfg.n_ceps);
  const std::size_t dims = cfg.include_deltas ? 2 * n_ceps : n_ceps;
  FeatureMatrix out(frames, dims);

  std::vector<double> log_e(energies.dims());
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t i = 0; i < log_e.size(); ++i) {
      log_e[i] = std::log(std::max(energies.at(f, i), cfg.log_floor));
    }
    const auto c = DctOrthonormal(log_e);
    for (std::size_t k = 0; k < n_ceps; ++k) out.at(f, k) = c[k];
  }

  if (cfg.include_deltas) {
    // Regression over +-2 frames with edge frames repeated.
    constexpr int kWidth = 2;
    constexpr double kNorm = 2.0 * (1 * 1 + 2 * 2);
    const auto last = static_cast<std::ptrdiff_t>(frames) - 1;
    for (std::size_t f = 0; f < frames; ++f) {
      for (std::size_t k = 0; k < n_ceps; ++k) {
        double acc = 0.0;
        for (int n = 1; n <= kWidth; ++n) {
          const auto ahead = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(f) + n, last);
          const auto behind = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(f) - n, 0);
          acc += n * (out.at(static_cast<std::size_t>(ahead), k) -
                      out.at(static_cast<std::size_t>(behind), k));
        }
        out.at(f, n_ceps + k) = acc / kNorm;
      }
    }
  }
  return out;
}

}  // namespace snrbench
