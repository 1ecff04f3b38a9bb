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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "snrbench/error.h"
#include "test_util.h"

namespace snrbench {
namespace {

using testing::Sine;
using testing::WhiteNoise;

// Direct O(N^2) power spectrum of one pre-emphasized, Hamming-windowed
// frame, followed by explicit triangles. Independent of FFTW.
std::vector<double> OracleEnergies(const std::vector<double>& x, std::size_t start,
                                   const LfccConfig& cfg) {
  const int len = cfg.FrameLength();
  std::vector<double> frame(static_cast<std::size_t>(len));
  for (int n = 0; n < len; ++n) {
    const std::size_t i = start + static_cast<std::size_t>(n);
    const double prev = i == 0 ? 0.0 : x[i - 1];
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
    frame[static_cast<std::size_t>(n)] = (x[i] - cfg.preemphasis * prev) * w;
  }
  const int bins = cfg.fft_size / 2 + 1;
  std::vector<double> power(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    double re = 0.0, im = 0.0;
    for (int n = 0; n < len; ++n) {
      const double ang = -2.0 * std::numbers::pi * k * n / cfg.fft_size;
      re += frame[static_cast<std::size_t>(n)] * std::cos(ang);
      im += frame[static_cast<std::size_t>(n)] * std::sin(ang);
    }
    power[static_cast<std::size_t>(k)] = re * re + im * im;
  }
  const double nyq = cfg.sample_rate / 2.0;
  const double spacing = nyq / (cfg.n_filters + 1);
  std::vector<double> e(static_cast<std::size_t>(cfg.n_filters), 0.0);
  for (int m = 0; m < cfg.n_filters; ++m) {
    const double c = spacing * (m + 1);
    for (int k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * cfg.sample_rate / cfg.fft_size;
      const double tri = std::max(0.0, 1.0 - std::abs(f - c) / spacing);
      e[static_cast<std::size_t>(m)] += tri * power[static_cast<std::size_t>(k)];
    }
  }
  return e;
}

TEST(Lfcc, FrameCountFollowsTheFraming) {
  LfccConfig cfg;
  EXPECT_EQ(cfg.FrameLength(), 400);
  EXPECT_EQ(cfg.FrameHop(), 160);
  EXPECT_EQ(LfccFrameCount(399, cfg), 0u);
  EXPECT_EQ(LfccFrameCount(400, cfg), 1u);
  EXPECT_EQ(LfccFrameCount(559, cfg), 1u);
  EXPECT_EQ(LfccFrameCount(560, cfg), 2u);
  EXPECT_EQ(LfccFrameCount(32000, cfg), 198u);
  for (std::size_t n = 400; n < 3000; n += 37) {
    EXPECT_EQ(ExtractLfcc(WhiteNoise(n, n, 0.1, 16000), cfg).frames(), (n - 400) / 160 + 1);
  }
}

TEST(Lfcc, TooShortInputThrows) {
  try {
    ExtractLfcc(WhiteNoise(1, 399, 0.1, 16000), LfccConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooShort);
  }
}

TEST(Lfcc, InvalidConfigurationsAreRejected) {
  LfccConfig cfg;
  cfg.fft_size = 256;  // shorter than a 400-sample frame
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = LfccConfig{};
  cfg.fft_size = 600;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = LfccConfig{};
  cfg.n_ceps = 21;
  EXPECT_THROW(cfg.Validate(), Error);
  EXPECT_THROW(ExtractLfcc(WhiteNoise(1, 4000, 0.1, 8000), LfccConfig{}), Error);
}

TEST(Lfcc, EnergiesMatchDirectDft) {
  LfccConfig cfg;
  const AudioBuffer noise = WhiteNoise(17, 2000, 0.3, 16000);
  const std::vector<double> x(noise.samples().begin(), noise.samples().end());
  const FeatureMatrix e = FilterbankEnergies(noise, cfg);
  for (std::size_t f : {0u, 3u, 9u}) {
    const auto oracle = OracleEnergies(x, f * 160, cfg);
    for (std::size_t m = 0; m < oracle.size(); ++m) {
      EXPECT_NEAR(e.at(f, m), oracle[m], 1e-9 * std::max(1.0, oracle[m])) << f << "," << m;
    }
  }
}

TEST(Lfcc, SineEnergyPeaksInTheNearestFilter) {
  LfccConfig cfg;
  cfg.preemphasis = 0.0;
  const LinearFilterbank bank(cfg);
  for (double freq : {500.0, 1523.0, 3000.0, 6100.0}) {
    const FeatureMatrix e = FilterbankEnergies(Sine(freq, 0.5, 4000, 16000), cfg);
    const auto& centers = bank.centers_hz();
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < centers.size(); ++i) {
      if (std::abs(centers[i] - freq) < std::abs(centers[nearest] - freq)) nearest = i;
    }
    for (std::size_t f = 0; f < e.frames(); ++f) {
      std::size_t best = 0;
      for (std::size_t m = 1; m < e.dims(); ++m) {
        if (e.at(f, m) > e.at(f, best)) best = m;
      }
      ASSERT_EQ(best, nearest) << freq;
    }
  }
}

TEST(Lfcc, FilterbankIsAPartitionOfUnityBetweenOuterCenters) {
  LfccConfig cfg;
  const LinearFilterbank bank(cfg);
  ASSERT_EQ(bank.size(), 20);
  const double lo = bank.centers_hz().front();
  const double hi = bank.centers_hz().back();
  EXPECT_NEAR(lo, 8000.0 / 21, 1e-9);
  for (double f = lo; f <= hi; f += 3.7) {
    double sum = 0.0;
    for (int i = 0; i < bank.size(); ++i) sum += bank.Weight(i, f);
    EXPECT_NEAR(sum, 1.0, 1e-6) << f;
  }
  for (int i = 0; i < bank.size(); ++i) {
    EXPECT_DOUBLE_EQ(bank.Weight(i, bank.centers_hz()[static_cast<std::size_t>(i)]), 1.0);
  }
}

TEST(Lfcc, SilenceGivesTheFlooredLogEnergy) {
  LfccConfig cfg;
  const FeatureMatrix c = ExtractLfcc(AudioBuffer(std::vector<double>(1600, 0.0), 16000), cfg);
  // DCT of the constant vector log(floor) * 1 is sqrt(N) log(floor) in c0.
  for (std::size_t f = 0; f < c.frames(); ++f) {
    EXPECT_NEAR(c.at(f, 0), std::sqrt(20.0) * std::log(1e-10), 1e-9);
    for (std::size_t k = 1; k < c.dims(); ++k) EXPECT_NEAR(c.at(f, k), 0.0, 1e-9);
  }
}

TEST(Lfcc, AmplitudeScalingMovesOnlyC0) {
  LfccConfig cfg;
  const AudioBuffer x = WhiteNoise(5, 8000, 0.2, 16000);
  for (double a : {0.1, 3.0}) {
    std::vector<double> scaled(x.samples().begin(), x.samples().end());
    for (double& v : scaled) v *= a;
    const FeatureMatrix c1 = ExtractLfcc(x, cfg);
    const FeatureMatrix c2 = ExtractLfcc(AudioBuffer(scaled, 16000), cfg);
    for (std::size_t f = 0; f < c1.frames(); ++f) {
      EXPECT_NEAR(c2.at(f, 0) - c1.at(f, 0), std::sqrt(20.0) * 2.0 * std::log(a), 1e-6);
      for (std::size_t k = 1; k < c1.dims(); ++k) EXPECT_NEAR(c2.at(f, k), c1.at(f, k), 1e-6);
    }
  }
}

TEST(Lfcc, DctIsOrthonormal) {
  for (std::size_t n : {1u, 2u, 7u, 20u, 33u}) {
    std::vector<std::vector<double>> rows(n);  // rows[i] = DCT(e_i)
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> e(n, 0.0);
      e[i] = 1.0;
      rows[i] = DctOrthonormal(e);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < n; ++k) dot += rows[i][k] * rows[j][k];
        EXPECT_NEAR(dot, i == j ? 1.0 : 0.0, 1e-9) << n;
      }
    }
    const AudioBuffer v = WhiteNoise(n, n, 1.0, 16000);
    const auto back = InverseDctOrthonormal(DctOrthonormal(v.samples()));
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(back[i], v.samples()[i], 1e-9);
  }
}

TEST(Lfcc, DctOfACosineHitsOneCoefficient) {
  const std::size_t n = 16;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(std::numbers::pi * 3 * (2.0 * i + 1) / (2.0 * n));
  const auto c = DctOrthonormal(x);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(c[k], k == 3 ? std::sqrt(n / 2.0) : 0.0, 1e-9);
  }
}

TEST(Lfcc, DeltasAreTheFivePointRegression) {
  LfccConfig cfg;
  const AudioBuffer x = WhiteNoise(9, 4000, 0.2, 16000);
  const FeatureMatrix base = ExtractLfcc(x, cfg);
  cfg.include_deltas = true;
  const FeatureMatrix full = ExtractLfcc(x, cfg);
  ASSERT_EQ(full.dims(), 40u);
  ASSERT_EQ(full.frames(), base.frames());
  const auto t = static_cast<long>(base.frames());
  auto clamp = [&](long f) { return static_cast<std::size_t>(std::clamp(f, 0L, t - 1)); };
  for (long f = 0; f < t; ++f) {
    for (std::size_t k = 0; k < 20; ++k) {
      EXPECT_EQ(full.at(static_cast<std::size_t>(f), k), base.at(static_cast<std::size_t>(f), k));
      const double d = (base.at(clamp(f + 1), k) - base.at(clamp(f - 1), k) +
                        2.0 * (base.at(clamp(f + 2), k) - base.at(clamp(f - 2), k))) /
                       10.0;
      EXPECT_NEAR(full.at(static_cast<std::size_t>(f), 20 + k), d, 1e-12);
    }
  }
}

TEST(Lfcc, SummaryIsMeanThenPopulationStd) {
  FeatureMatrix m(4, 2);
  const double vals[4][2] = {{1, 10}, {2, 10}, {3, 10}, {6, 10}};
  for (std::size_t f = 0; f < 4; ++f) {
    for (std::size_t d = 0; d < 2; ++d) m.at(f, d) = vals[f][d];
  }
  const auto s = m.Summary();
  ASSERT_EQ(s.size(), 4u);
  EXPECT_DOUBLE_EQ(s[0], 3.0);
  EXPECT_DOUBLE_EQ(s[1], 10.0);
  EXPECT_DOUBLE_EQ(s[2], std::sqrt(3.5));
  EXPECT_DOUBLE_EQ(s[3], 0.0);
}

TEST(Lfcc, ExtractionIsDeterministic) {
  const AudioBuffer x = WhiteNoise(11, 6000, 0.3, 16000);
  LfccConfig cfg;
  cfg.include_deltas = true;
  const FeatureMatrix a = ExtractLfcc(x, cfg);
  const FeatureMatrix b = ExtractLfcc(x, cfg);
  for (std::size_t f = 0; f < a.frames(); ++f) {
    for (std::size_t d = 0; d < a.dims(); ++d) ASSERT_EQ(a.at(f, d), b.at(f, d));
  }
}

}  // namespace
}  // namespace snrbench
