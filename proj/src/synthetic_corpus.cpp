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

#include "snrbench/synthetic_corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "snrbench/error.h"
#include "snrbench/keyed_rng.h"
#include "snrbench/wav_io.h"

namespace snrbench {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double Gaussian(KeyedStream& rng) {
  const double u1 = 1.0 - rng.NextUniform();
  const double u2 = rng.NextUniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Uniform(KeyedStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.NextUniform(); }

void ScalePeak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0) return;
  for (double& v : x) v *= peak / m;
}

void ScaleRms(std::vector<double>& x, double rms) {
  double p = 0.0;
  for (double v : x) p += v * v;
  p = std::sqrt(p / static_cast<double>(x.size()));
  if (p == 0.0) return;
  for (double& v : x) v *= rms / p;
}

std::size_t SampleCount(double duration_s, int rate) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(duration_s * rate)));
}

}  // namespace

AudioBuffer SynthesizeUtterance(Authenticity authenticity, std::uint64_t seed, double duration_s,
                                int sample_rate) {
  KeyedStream rng(seed);
  const std::size_t n = SampleCount(duration_s, sample_rate);
  const double fs = sample_rate;
  const bool spoof = authenticity == Authenticity::kSpoof;

  const double f0 = Uniform(rng, 100.0, 220.0);
  const double vib_rate = Uniform(rng, 4.0, 6.5);
  const double vib_depth = Uniform(rng, 0.01, 0.04);
  const double syl_rate = Uniform(rng, 3.0, 5.0);
  const double syl_phase = Uniform(rng, 0.0, kTwoPi);
  const double top_hz = std::min(spoof ? 3800.0 : 7000.0, 0.45 * fs);
  const int n_harm = std::max(1, static_cast<int>(top_hz / (f0 * (1.0 + vib_depth))));
  std::vector<double> harm_amp(static_cast<std::size_t>(n_harm));
  for (int k = 0; k < n_harm; ++k) {
    harm_amp[static_cast<std::size_t>(k)] = Uniform(rng, 0.6, 1.0) / (k + 1);
  }
  const double ring_hz = Uniform(rng, 900.0, 1400.0);
  const double ring_depth = Uniform(rng, 0.25, 0.4);

  std::vector<double> x(n, 0.0);
  double phase = 0.0;
  double prev_w = 0.0, prev2_w = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double inst_f0 = f0 * (1.0 + vib_depth * std::sin(kTwoPi * vib_rate * t));
    phase += kTwoPi * inst_f0 / fs;
    if (phase > kTwoPi * 1e6) phase = std::fmod(phase, kTwoPi);
    // sin((k + 1) phase) by the Chebyshev recurrence.
    const double two_cos = 2.0 * std::cos(phase);
    double s_prev = 0.0, s_cur = std::sin(phase), v = 0.0;
    for (int k = 0; k < n_harm; ++k) {
      v += harm_amp[static_cast<std::size_t>(k)] * s_cur;
      const double s_next = two_cos * s_cur - s_prev;
      s_prev = s_cur;
      s_cur = s_next;
    }
    const double s = std::sin(kTwoPi * syl_rate * t + syl_phase);
    const double env = 0.15 + 0.85 * s * s;
    v *= env;
    if (spoof) {
      v *= (1.0 - ring_depth) + ring_depth * std::cos(kTwoPi * ring_hz * t);
    } else {
      // Second difference of white noise: a rising breath floor.
      const double w = Gaussian(rng);
      v += 0.06 * env * (w - 2.0 * prev_w + prev2_w);
      prev2_w = prev_w;
      prev_w = w;
    }
    x[i] = v;
  }
  ScalePeak(x, Uniform(rng, 0.3, 0.8));
  return AudioBuffer(std::move(x), sample_rate);
}

AudioBuffer SynthesizeNoise(NoiseCategoryKind category, std::uint64_t seed, double duration_s,
                            int sample_rate) {
  KeyedStream rng(seed);
  const std::size_t n = SampleCount(duration_s, sample_rate);
  const double fs = sample_rate;
  std::vector<double> x(n, 0.0);
  switch (category) {
    case NoiseCategoryKind::kDomestic: {
      // Leaky-integrated noise with sparse clatter.
      double y = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        y = 0.97 * y + Gaussian(rng);
        double v = y;
        if (rng.NextBernoulli(2.0 / fs)) v += 40.0 * Gaussian(rng);
        x[i] = v;
      }
      break;
    }
    case NoiseCategoryKind::kOffice: {
      // Pink-ish noise (three-pole approximation) plus mains hum.
      double b0 = 0.0, b1 = 0.0, b2 = 0.0;
      const double hum = Uniform(rng, 0.0, kTwoPi);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = Gaussian(rng);
        b0 = 0.99765 * b0 + w * 0.0990460;
        b1 = 0.96300 * b1 + w * 0.2965164;
        b2 = 0.57000 * b2 + w * 1.0526913;
        const double t = static_cast<double>(i) / fs;
        x[i] = b0 + b1 + b2 + w * 0.1848 + 0.3 * std::sin(kTwoPi * 120.0 * t + hum) +
               0.15 * std::sin(kTwoPi * 240.0 * t + hum);
      }
      break;
    }
    case NoiseCategoryKind::kOutdoor: {
      // Broadband noise with slow wind-like swells.
      double y = 0.0;
      const double swell = Uniform(rng, 0.2, 0.6);
      for (std::size_t i = 0; i < n; ++i) {
        y = 0.5 * y + Gaussian(rng);
        const double t = static_cast<double>(i) / fs;
        x[i] = y * (1.0 + 0.5 * std::sin(kTwoPi * swell * t));
      }
      break;
    }
    case NoiseCategoryKind::kTransport:
    case NoiseCategoryKind::kOther: {
      // Low rumble plus engine harmonics and a hiss floor.
      double y = 0.0;
      const double engine = Uniform(rng, 30.0, 60.0);
      for (std::size_t i = 0; i < n; ++i) {
        y = 0.995 * y + Gaussian(rng);
        const double t = static_cast<double>(i) / fs;
        double v = 0.1 * y + 0.5 * Gaussian(rng);
        for (int k = 1; k <= 4; ++k) v += (1.0 / k) * std::sin(kTwoPi * engine * k * t);
        x[i] = v;
      }
      break;
    }
  }
  ScaleRms(x, 0.1);
  return AudioBuffer(std::move(x), sample_rate);
}

FixtureLayout WriteFixtureCorpus(const FixtureOptions& options) {
  namespace fs = std::filesystem;
  if (options.root.empty()) throw Error(ErrorCode::kInvalidArgument, "fixture root is empty");
  FixtureLayout layout;
  layout.speech_root = options.root / "speech";
  layout.noise_root = options.root / "noise";
  const fs::path protocol_dir = options.root / "protocols";
  std::error_code ec;
  for (const auto& d : {layout.speech_root, layout.noise_root, protocol_dir}) {
    fs::create_directories(d, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + d.string() + ": " + ec.message());
  }

  const struct {
    Split split;
    int per_class;
    char prefix;
  } splits[] = {{Split::kTrain, options.train_per_class, 'T'},
                {Split::kDev, options.dev_per_class, 'D'},
                {Split::kTest, options.test_per_class, 'E'}};

  for (const auto& s : splits) {
    const fs::path proto = protocol_dir / (std::string(ToString(s.split)) + ".txt");
    std::ofstream out(proto, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + proto.string());
    for (int i = 0; i < 2 * s.per_class; ++i) {
      const Authenticity a = i % 2 == 0 ? Authenticity::kBonafide : Authenticity::kSpoof;
      char utt[32], spk[32];
      std::snprintf(utt, sizeof(utt), "%c_%05d", s.prefix, i);
      std::snprintf(spk, sizeof(spk), "SPK_%03d", (i / 2) % 20);
      KeyedStream rng(DeriveSeed(options.seed, utt));
      const double dur = rng.NextBernoulli(options.short_fraction) ? Uniform(rng, 1.2, 1.9)
                                                                   : Uniform(rng, 2.2, 4.0);
      const int rate = rng.NextBernoulli(options.off_rate_fraction) ? 22050 : kCanonicalRateHz;
      const AudioBuffer audio = SynthesizeUtterance(a, rng.NextU64(), dur, rate);
      EncodeWav(audio, layout.speech_root / (std::string(utt) + ".wav"), WavBitDepth::kPcm16);
      out << spk << ' ' << utt << " - " << (a == Authenticity::kBonafide ? "A00" : "A07") << ' '
          << ToString(a) << '\n';
    }
    if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + proto.string());
    layout.protocols[s.split] = proto;
  }

  const struct {
    NoiseCategoryKind kind;
    const char* dir;
  } categories[] = {{NoiseCategoryKind::kDomestic, "Domestic"},
                    {NoiseCategoryKind::kOffice, "Office"},
                    {NoiseCategoryKind::kOutdoor, "Outdoor"},
                    {NoiseCategoryKind::kTransport, "Transport"}};
  for (const auto& c : categories) {
    const fs::path dir = layout.noise_root / c.dir;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + dir.string());
    for (int k = 0; k < options.noise_clips_per_category; ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "clip_%02d", k);
      KeyedStream rng(DeriveSeed(options.seed, std::string(c.dir) + "/" + name));
      // Clip 0 is shorter than most utterances so tiling gets exercised.
      const double dur = k == 0 ? Uniform(rng, 1.0, 1.5) : Uniform(rng, 3.0, 6.0);
      const int rate = k == 1 ? 22050 : kCanonicalRateHz;
      const AudioBuffer noise = SynthesizeNoise(c.kind, rng.NextU64(), dur, rate);
      EncodeWav(noise, dir / (std::string(name) + ".wav"), WavBitDepth::kFloat32);
    }
  }
  return layout;
}

}  // namespace snrbench
