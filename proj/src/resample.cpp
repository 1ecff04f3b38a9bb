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

#include "snrbench/resample.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "snrbench/error.h"

namespace snrbench {
namespace {

constexpr double kStopbandDb = 80.0;
constexpr double kPassbandFraction = 0.9;

double KaiserBeta(double attenuation_db) {
  return 0.1102 * (attenuation_db - 8.7);
}

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

AudioBuffer Resample(const AudioBuffer& input, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "target rate must be positive, got " + std::to_string(target_rate));
  }
  const int source_rate = input.sample_rate();
  if (target_rate == source_rate) return input;

  const std::int64_t g = std::gcd(source_rate, target_rate);
  const std::int64_t up = target_rate / g;
  const std::int64_t down = source_rate / g;
  const auto in = input.samples();
  const std::int64_t n_in = static_cast<std::int64_t>(in.size());
  const std::int64_t n_out = (n_in * up + down / 2) / down;

  // Frequencies are in cycles per input sample.
  const double ratio = std::min(1.0, static_cast<double>(target_rate) / source_rate);
  const double passband = 0.5 * ratio * kPassbandFraction;
  const double stopband = 0.5 * ratio;
  const double cutoff = 0.5 * (passband + stopband);
  const double transition = stopband - passband;
  const double taps = (kStopbandDb - 7.95) / (14.36 * transition);
  const double half_width = std::ceil(taps / 2.0);
  const double beta = KaiserBeta(kStopbandDb);
  const double window_norm = std::cyl_bessel_i(0.0, beta);

  auto kernel = [&](double d) {
    const double u = d / half_width;
    if (std::abs(u) >= 1.0) return 0.0;
    const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u)) / window_norm;
    return 2.0 * cutoff * Sinc(2.0 * cutoff * d) * window;
  };

  const auto reach = static_cast<std::int64_t>(half_width);
  const std::int64_t span = 2 * reach + 2;  // taps j in [-reach, reach + 1]

  // One kernel row per fractional phase when the phase count is modest.
  // Tables depend only on the rate pair and are kept for reuse.
  constexpr std::int64_t kMaxTablePhases = 4096;
  const bool tabulate = up <= kMaxTablePhases;
  std::shared_ptr<const std::vector<double>> table_ptr;
  if (tabulate) {
    static std::mutex cache_mutex;
    static std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const std::vector<double>>>
        cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto& entry = cache[{up, down}];
    if (!entry) {
      auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(up * span));
      for (std::int64_t p = 0; p < up; ++p) {
        const double frac = static_cast<double>(p) / static_cast<double>(up);
        for (std::int64_t j = -reach; j <= reach + 1; ++j) {
          (*table)[static_cast<std::size_t>(p * span + j + reach)] =
              kernel(frac - static_cast<double>(j));
        }
      }
      entry = std::move(table);
    }
    table_ptr = entry;
  }
  const std::vector<double> empty_table;
  const std::vector<double>& table = table_ptr ? *table_ptr : empty_table;

  std::vector<double> out(static_cast<std::size_t>(n_out));
  for (std::int64_t m = 0; m < n_out; ++m) {
    const std::int64_t num = m * down;
    const std::int64_t base = num / up;
    const std::int64_t phase = num % up;
    const double frac = static_cast<double>(phase) / static_cast<double>(up);
    const std::int64_t lo = std::max<std::int64_t>(-reach, -base);
    const std::int64_t hi = std::min<std::int64_t>(reach + 1, n_in - 1 - base);
    double acc = 0.0;
    if (tabulate) {
      const double* row = table.data() + phase * span + reach;
      const double* x = in.data() + base;
      for (std::int64_t j = lo; j <= hi; ++j) acc += x[j] * row[j];
    } else {
      for (std::int64_t j = lo; j <= hi; ++j) {
        acc += in[static_cast<std::size_t>(base + j)] * kernel(frac - static_cast<double>(j));
      }
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return AudioBuffer(std::move(out), target_rate);
}

}  // namespace snrbench
