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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits non-zero if any criterion fails.
//
//   acceptance [work_dir]
//
// Without work_dir a temporary directory is used and removed afterwards.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "snrbench/cli.h"
#include "snrbench/commands.h"
#include "snrbench/condition_plan.h"
#include "snrbench/keyed_rng.h"
#include "snrbench/lfcc.h"
#include "snrbench/linear_scorer.h"
#include "snrbench/manifest.h"
#include "snrbench/metrics.h"
#include "snrbench/render.h"
#include "snrbench/report.h"
#include "snrbench/snr.h"
#include "snrbench/synthetic_corpus.h"

namespace fs = std::filesystem;
using namespace snrbench;

namespace {

constexpr double kPi = 3.141592653589793;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

double Gaussian(KeyedStream& rng) {
  const double u1 = 1.0 - rng.NextUniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * rng.NextUniform());
}

int Invoke(std::vector<std::string> args, std::string* err = nullptr) {
  args.insert(args.begin(), "snrbench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, e;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, e);
  if (err) *err = e.str();
  return code;
}

void MustInvoke(const std::vector<std::string>& args) {
  std::string err;
  if (Invoke(args, &err) != kExitOk) {
    std::string cmd;
    for (const auto& a : args) cmd += a + " ";
    throw std::runtime_error("command failed: " + cmd + "\n" + err);
  }
}

std::map<std::string, std::string> TreeBytes(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    out[fs::relative(e.path(), root).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return out;
}

FixtureLayout MakeFixture(const fs::path& root, int train, int dev, int test, int noise) {
  FixtureOptions o;
  o.root = root;
  o.train_per_class = train;
  o.dev_per_class = dev;
  o.test_per_class = test;
  o.noise_clips_per_category = noise;
  return WriteFixtureCorpus(o);
}

std::vector<std::string> ScanCommand(const FixtureLayout& f, const fs::path& manifest) {
  std::vector<std::string> args{"scan", "--speech-root", f.speech_root.string(), "--noise-root",
                                f.noise_root.string(), "--out", manifest.string()};
  for (const auto& [split, path] : f.protocols) {
    args.push_back("--protocol");
    args.push_back(std::string(ToString(split)) + "=" + path.string());
  }
  return args;
}

// ---------------------------------------------------------------------------
// 1. SNR exactness

Outcome SnrExactness(const fs::path& work) {
  const auto t0 = std::chrono::steady_clock::now();
  const FixtureLayout fx = MakeFixture(work / "fixture", 40, 10, 40, 4);
  ProtocolLayout layout;
  layout.audio_root = fx.speech_root;
  std::vector<ProtocolSource> sources;
  for (const auto& [split, path] : fx.protocols) sources.push_back({path, split});
  Manifest m;
  m.trials = ScanSpeech(sources, layout, 4);
  m.noises = ScanNoiseCatalog(fx.noise_root, DefaultCategoryAliases(), 4);

  // Every clip of the catalog in the bank, keyed by clip_id.
  ConditionPlan all_noise;
  for (const auto& n : m.noises) {
    ConditionAssignment a;
    a.noise_ids = {n.clip_id};
    a.corruption = Corruption::kNoisy;
    all_noise.assignments.push_back(a);
  }
  const NoiseBank bank = LoadNoiseBank(all_noise, m, 4);

  KeyedStream rng(DeriveSeed(2026, "snr-exactness"));
  std::size_t mixes = 0, rescaled = 0;
  double worst_pre = 0.0, worst_rendered = 0.0;
  for (int pair = 0; pair < 1000; ++pair) {
    const TrialRecord& trial = m.trials[rng.NextU64() % m.trials.size()];
    ConditionAssignment a;
    a.utt_id = trial.utt_id;
    a.segment.len_s = 2.0;
    const double span = std::max(0.0, trial.duration_s - 2.0);
    a.segment.start_s = std::floor(rng.NextUniform() * span * kCanonicalRateHz) / kCanonicalRateHz;
    a.noise_ids = {m.noises[rng.NextU64() % m.noises.size()].clip_id};
    if (rng.NextBernoulli(0.1)) {
      std::string second;
      do {
        second = m.noises[rng.NextU64() % m.noises.size()].clip_id;
      } while (second == a.noise_ids[0]);
      a.noise_ids.push_back(second);
    }
    a.crop_offset_seed = rng.NextU64();
    ConditionAssignment clean = a;
    clean.noise_ids.clear();
    const AudioBuffer clean_audio = RenderAssignment(clean, trial, kCanonicalRateHz, bank).audio;
    const std::vector<double> speech(clean_audio.samples().begin(), clean_audio.samples().end());
    a.corruption = Corruption::kNoisy;
    for (double snr : kBenchmarkSnrGridDb) {
      a.snr = SnrDb{snr};
      const RenderedTrial r = RenderAssignment(a, trial, kCanonicalRateHz, bank);
      const double rescale = r.label.peak_rescale;
      const auto mixed = r.audio.samples();
      double ps = 0.0, pn_pre = 0.0, pn_rendered = 0.0, ps_rendered = 0.0;
      for (std::size_t i = 0; i < speech.size(); ++i) {
        const double n_pre = mixed[i] / rescale - speech[i];
        const double s_out = speech[i] * rescale;
        const double n_out = static_cast<double>(static_cast<float>(mixed[i])) - s_out;
        ps += speech[i] * speech[i];
        pn_pre += n_pre * n_pre;
        ps_rendered += s_out * s_out;
        pn_rendered += n_out * n_out;
      }
      worst_pre = std::max(worst_pre, std::abs(10.0 * std::log10(ps / pn_pre) - snr));
      worst_pre = std::max(worst_pre, std::abs(*r.label.achieved_snr_db - snr));
      worst_rendered =
          std::max(worst_rendered, std::abs(10.0 * std::log10(ps_rendered / pn_rendered) - snr));
      rescaled += rescale != 1.0;
      ++mixes;
    }
  }
  const double secs = Seconds(t0);
  Outcome o;
  o.pass = mixes == 9000 && worst_pre <= 1e-6 && worst_rendered <= 0.1 && secs < 60.0;
  o.detail = std::to_string(mixes) + " mixtures, max error " + Fmt("%.2e", worst_pre) +
             " dB before rescale, " + Fmt("%.2e", worst_rendered) + " dB rendered (" +
             std::to_string(rescaled) + " rescaled), " + Fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------------
// 2. Split composition

Outcome SplitComposition() {
  Manifest m;
  for (int i = 0; i < 10000; ++i) {
    for (Split split : {Split::kTest, Split::kDev}) {
      TrialRecord t;
      t.utt_id = std::string(split == Split::kTest ? "E" : "D") + std::to_string(i);
      t.audio_path = t.utt_id + ".wav";
      t.authenticity = i % 2 ? Authenticity::kSpoof : Authenticity::kBonafide;
      t.split = split;
      t.duration_s = 3.0;
      m.trials.push_back(t);
    }
  }
  for (int k = 0; k < 8; ++k) {
    NoiseClip n;
    n.clip_id = "noise/" + std::to_string(k);
    n.audio_path = n.clip_id + ".wav";
    n.category.kind = static_cast<NoiseCategoryKind>(k % 4);
    n.duration_s = 5.0;
    m.noises.push_back(n);
  }
  SamplingPolicy p;
  p.root_seed = 20260515;
  const ConditionPlan plan = PlanMixedTest(m, p);
  std::map<Split, std::pair<std::size_t, std::size_t>> noisy;  // split -> (noisy, total)
  std::map<double, std::size_t> by_snr;
  std::size_t n_noisy = 0;
  for (const auto& a : plan.assignments) {
    auto& [nz, tot] = noisy[a.split];
    ++tot;
    if (a.corruption == Corruption::kNoisy) {
      ++nz;
      ++n_noisy;
      ++by_snr[a.snr->value];
    }
  }
  const double f_test = static_cast<double>(noisy[Split::kTest].first) / noisy[Split::kTest].second;
  const double f_dev = static_cast<double>(noisy[Split::kDev].first) / noisy[Split::kDev].second;
  double worst_snr = 0.0;
  for (double s : kBenchmarkSnrGridDb) {
    worst_snr = std::max(worst_snr, std::abs(static_cast<double>(by_snr[s]) / n_noisy - 1.0 / 9.0));
  }
  Outcome o;
  o.pass = noisy[Split::kTest].second == 10000 && noisy[Split::kDev].second == 10000 &&
           std::abs(f_test - 0.8) <= 0.02 && std::abs(f_dev - 0.2) <= 0.02 &&
           by_snr.size() == 9 && worst_snr <= 0.01;
  o.detail = "test noisy " + Fmt("%.4f", f_test) + ", dev noisy " + Fmt("%.4f", f_dev) +
             ", max SNR frequency deviation " + Fmt("%.4f", worst_snr) + " over 10000+10000 trials";
  return o;
}

// ---------------------------------------------------------------------------
// 3. Determinism

void FullRun(const FixtureLayout& fx, const fs::path& manifest, const fs::path& out) {
  MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (out / "train").string(),
              "--seed", "17", "--split", "train", "--jobs", "4", "multicondition"});
  MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (out / "test").string(),
              "--seed", "17", "--split", "test", "--jobs", "2", "mixed-test"});
  MustInvoke({"score-baseline", "--train", (out / "train").string(), "--eval",
              (out / "test").string(), "--seed", "5", "--jobs", "3", "--model-out",
              (out / "model.json").string(), "--out", (out / "scores.tsv").string()});
  MustInvoke({"eval", "--scores", (out / "scores.tsv").string(), "--out-dir",
              (out / "report").string()});
  (void)fx;
}

Outcome Determinism(const fs::path& work) {
  const FixtureLayout fx = MakeFixture(work / "fixture", 20, 4, 20, 2);
  fs::create_directories(work / "a");
  fs::create_directories(work / "b");
  fs::create_directories(work / "shuffled");
  MustInvoke(ScanCommand(fx, work / "a" / "manifest.jsonl"));
  FullRun(fx, work / "a" / "manifest.jsonl", work / "a" / "run");
  MustInvoke(ScanCommand(fx, work / "b" / "manifest.jsonl"));
  FullRun(fx, work / "b" / "manifest.jsonl", work / "b" / "run");

  Manifest m = ReadManifest(work / "a" / "manifest.jsonl");
  KeyedStream rng(7);
  for (std::size_t i = m.trials.size() - 1; i > 0; --i) {
    std::swap(m.trials[i], m.trials[rng.NextU64() % (i + 1)]);
  }
  for (std::size_t i = m.noises.size() - 1; i > 0; --i) {
    std::swap(m.noises[i], m.noises[rng.NextU64() % (i + 1)]);
  }
  WriteManifest(m, work / "shuffled" / "manifest.jsonl");
  FullRun(fx, work / "shuffled" / "manifest.jsonl", work / "shuffled" / "run");

  const auto a = TreeBytes(work / "a");
  const auto b = TreeBytes(work / "b");
  const auto run_a = TreeBytes(work / "a" / "run");
  const auto run_s = TreeBytes(work / "shuffled" / "run");
  const bool manifest_differs = TreeBytes(work / "shuffled").at("manifest.jsonl") !=
                                a.at("manifest.jsonl");
  Outcome o;
  o.pass = a == b && run_a == run_s && manifest_differs && a.size() > 20;
  o.detail = std::to_string(a.size()) + " files identical across two runs: " +
             (a == b ? "yes" : "no") + "; shuffled manifest gives identical build/score/eval: " +
             (run_a == run_s ? "yes" : "no");
  return o;
}

// ---------------------------------------------------------------------------
// 4 and 5. Metric oracles and monotone invariance

struct ScoreSet {
  std::vector<double> scores;
  std::vector<int> truth;
};

double OracleAuc(const ScoreSet& c) {
  double wins = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < c.scores.size(); ++i) {
    for (std::size_t j = 0; j < c.scores.size(); ++j) {
      if (c.truth[i] != 1 || c.truth[j] != 0) continue;
      pairs += 1.0;
      wins += c.scores[i] > c.scores[j] ? 1.0 : (c.scores[i] == c.scores[j] ? 0.5 : 0.0);
    }
  }
  return wins / pairs;
}

double OracleEer(const ScoreSet& c) {
  std::set<double> uniq(c.scores.begin(), c.scores.end());
  std::vector<double> ts(uniq.begin(), uniq.end());
  ts.push_back(std::numeric_limits<double>::infinity());
  double npos = 0.0, nneg = 0.0;
  for (int t : c.truth) (t ? npos : nneg) += 1.0;
  double prev_far = 1.0, prev_frr = 0.0;
  for (double t : ts) {
    double fa = 0.0, fr = 0.0;
    for (std::size_t i = 0; i < c.scores.size(); ++i) {
      fa += c.truth[i] == 0 && c.scores[i] >= t;
      fr += c.truth[i] == 1 && c.scores[i] < t;
    }
    const double far = fa / nneg, frr = fr / npos;
    if (far <= frr) {
      const double d0 = prev_far - prev_frr, d1 = far - frr;
      return prev_far + d0 / (d0 - d1) * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return -1.0;
}

// Every multiset of (score, label) pairs with 2..8 elements over the grid,
// keeping those with both classes.
std::vector<ScoreSet> ExhaustiveSets(const std::vector<double>& grid) {
  std::vector<ScoreSet> out;
  const int kinds = static_cast<int>(grid.size()) * 2;
  std::vector<int> pick;
  std::function<void(int, int)> rec = [&](int start, int remaining) {
    if (pick.size() >= 2) {
      ScoreSet s;
      for (int k : pick) {
        s.scores.push_back(grid[static_cast<std::size_t>(k / 2)]);
        s.truth.push_back(k % 2);
      }
      const auto pos = std::count(s.truth.begin(), s.truth.end(), 1);
      if (pos > 0 && pos < static_cast<long>(s.truth.size())) out.push_back(std::move(s));
    }
    if (remaining == 0) return;
    for (int k = start; k < kinds; ++k) {
      pick.push_back(k);
      rec(k, remaining - 1);
      pick.pop_back();
    }
  };
  rec(0, 8);
  return out;
}

const std::vector<double> kScoreGrid = {-0.5, 0.0, 0.25, 1.0};

Outcome MetricOracles() {
  const auto sets = ExhaustiveSets(kScoreGrid);
  double worst_auc = 0.0, worst_eer = 0.0;
  for (const auto& s : sets) {
    worst_auc = std::max(worst_auc, std::abs(RocAuc(s.scores, s.truth) - OracleAuc(s)));
    worst_eer = std::max(worst_eer, std::abs(ComputeEer(s.scores, s.truth).eer - OracleEer(s)));
  }
  KeyedStream rng(4);
  std::vector<double> scores;
  std::vector<int> truth;
  for (int i = 0; i < 100000; ++i) {
    scores.push_back(Gaussian(rng) + 1.0);
    truth.push_back(1);
    scores.push_back(Gaussian(rng) - 1.0);
    truth.push_back(0);
  }
  const double gauss_eer = ComputeEer(scores, truth).eer;
  const double phi = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
  Outcome o;
  o.pass = sets.size() >= 10000 && worst_auc <= 1e-12 && worst_eer <= 1e-12 &&
           std::abs(gauss_eer - phi) <= 0.01;
  o.detail = std::to_string(sets.size()) + " exhaustive sets, max |AUC err| " +
             Fmt("%.1e", worst_auc) + ", max |EER err| " + Fmt("%.1e", worst_eer) +
             "; Gaussian EER " + Fmt("%.4f", gauss_eer) + " vs " + Fmt("%.4f", phi);
  return o;
}

Outcome MonotoneInvariance() {
  auto sets = ExhaustiveSets(kScoreGrid);
  KeyedStream rng(12);
  for (int i = 0; i < 2000; ++i) {
    ScoreSet s;
    const std::size_t n = 2 + rng.NextU64() % 199;
    for (std::size_t k = 0; k < n; ++k) {
      s.scores.push_back(std::round(Gaussian(rng) * 8.0) / 8.0);
      s.truth.push_back(static_cast<int>(k % 2));
    }
    sets.push_back(std::move(s));
  }
  const std::vector<std::function<double(double)>> transforms = {
      [](double x) { return 3.0 * x + 11.0; },
      [](double x) { return std::exp(x); },
      [](double x) { return x * x * x; },
      [](double x) { return 1.0 / (1.0 + std::exp(-x)); },
      [](double x) { return std::atan(5.0 * x); }};
  double worst = 0.0;
  std::size_t checks = 0;
  for (const auto& s : sets) {
    const double auc = RocAuc(s.scores, s.truth);
    const double eer = ComputeEer(s.scores, s.truth).eer;
    for (const auto& f : transforms) {
      std::vector<double> t;
      for (double v : s.scores) t.push_back(f(v));
      worst = std::max(worst, std::abs(RocAuc(t, s.truth) - auc));
      worst = std::max(worst, std::abs(ComputeEer(t, s.truth).eer - eer));
      ++checks;
    }
  }
  Outcome o;
  o.pass = worst <= 1e-12;
  o.detail = std::to_string(checks) + " transformed score sets, max change " + Fmt("%.1e", worst);
  return o;
}

// ---------------------------------------------------------------------------
// 6. LFCC and scorer gradient

Outcome LfccAndGradient() {
  LfccConfig cfg;
  std::vector<std::string> failures;

  // Pure tones land in the filter whose center is nearest.
  cfg.preemphasis = 0.0;
  const LinearFilterbank bank(cfg);
  int tones = 0, tone_hits = 0;
  for (double f = 250.0; f < 7800.0; f += 377.0) {
    std::vector<double> x(8000);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * std::sin(2.0 * kPi * f * i / 16000.0);
    const FeatureMatrix e = FilterbankEnergies(AudioBuffer(x, 16000), cfg);
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < bank.centers_hz().size(); ++i) {
      if (std::abs(bank.centers_hz()[i] - f) < std::abs(bank.centers_hz()[nearest] - f)) nearest = i;
    }
    bool ok = true;
    for (std::size_t fr = 0; fr < e.frames(); ++fr) {
      std::size_t best = 0;
      for (std::size_t m = 1; m < e.dims(); ++m) {
        if (e.at(fr, m) > e.at(fr, best)) best = m;
      }
      ok = ok && best == nearest;
    }
    ++tones;
    tone_hits += ok;
  }
  if (tone_hits != tones) failures.push_back("tone localization");

  // DCT basis vectors are orthonormal.
  double dct_err = 0.0;
  const std::size_t n = 20;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    rows.push_back(DctOrthonormal(e));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += rows[i][k] * rows[j][k];
      dct_err = std::max(dct_err, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  if (dct_err > 1e-9) failures.push_back("DCT orthonormality");

  // Scaling the waveform by a moves c0 by 2 sqrt(N) log a and nothing else.
  cfg = LfccConfig{};
  KeyedStream rng(31);
  std::vector<double> x(16000), y(16000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 0.2 * Gaussian(rng);
    y[i] = 4.0 * x[i];
  }
  const FeatureMatrix cx = ExtractLfcc(AudioBuffer(x, 16000), cfg);
  const FeatureMatrix cy = ExtractLfcc(AudioBuffer(y, 16000), cfg);
  double c0_err = 0.0, rest_err = 0.0;
  for (std::size_t f = 0; f < cx.frames(); ++f) {
    c0_err = std::max(c0_err, std::abs(cy.at(f, 0) - cx.at(f, 0) - 2.0 * std::sqrt(20.0) * std::log(4.0)));
    for (std::size_t k = 1; k < cx.dims(); ++k) {
      rest_err = std::max(rest_err, std::abs(cy.at(f, k) - cx.at(f, k)));
    }
  }
  if (c0_err > 1e-6 || rest_err > 1e-6) failures.push_back("amplitude scaling");

  // Analytic gradient against central differences.
  std::vector<std::vector<double>> inputs(64, std::vector<double>(8));
  std::vector<int> labels(64);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (double& v : inputs[i]) v = Gaussian(rng);
    labels[i] = rng.NextBernoulli(0.5) ? 1 : 0;
  }
  labels[0] = 1;
  labels[1] = 0;
  const LogisticObjective obj(inputs, labels, {1.0, 1.7});
  double worst_rel = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w(9);
    for (double& v : w) v = Gaussian(rng);
    const auto g = obj.Gradient(w);
    for (std::size_t d = 0; d < w.size(); ++d) {
      auto wp = w, wm = w;
      wp[d] += 1e-5;
      wm[d] -= 1e-5;
      const double fd = (obj.Value(wp) - obj.Value(wm)) / 2e-5;
      worst_rel = std::max(worst_rel, std::abs(fd - g[d]) / std::max(std::abs(g[d]), 1e-3));
    }
  }
  if (worst_rel >= 1e-4) failures.push_back("gradient check");

  Outcome o;
  o.pass = failures.empty();
  o.detail = std::to_string(tone_hits) + "/" + std::to_string(tones) + " tones localized, DCT err " +
             Fmt("%.1e", dct_err) + ", c0 shift err " + Fmt("%.1e", c0_err) + ", other ceps " +
             Fmt("%.1e", rest_err) + ", gradient rel err " + Fmt("%.1e", worst_rel);
  for (const auto& f : failures) o.detail += "; failed: " + f;
  return o;
}

// ---------------------------------------------------------------------------
// 7. Multi-condition training helps at 0 dB

Outcome MulticonditionDirection(const fs::path& work) {
  const FixtureLayout fx = MakeFixture(work / "fixture", 40, 2, 30, 4);
  const fs::path manifest = work / "manifest.jsonl";
  MustInvoke(ScanCommand(fx, manifest));
  int wins = 0;
  std::string detail;
  for (int seed = 1; seed <= 5; ++seed) {
    const fs::path run = work / ("seed_" + std::to_string(seed));
    MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (run / "train").string(),
                "--seed", std::to_string(seed), "--split", "train", "--jobs", "4",
                "pnoisy-sweep", "0", "0.5"});
    MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (run / "test").string(),
                "--seed", std::to_string(seed + 100), "--split", "test", "--jobs", "4",
                "fixed-snr", "0"});
    double eer[2] = {0.0, 0.0};
    int idx = 0;
    for (const char* p : {"0", "0.5"}) {
      const fs::path tag = run / (std::string("p_") + p);
      MustInvoke({"score-baseline", "--train", (run / "train" / (std::string("p_") + p)).string(),
                  "--eval", (run / "test" / "snr_0").string(), "--seed", std::to_string(seed),
                  "--jobs", "4", "--out", (tag / "scores.tsv").string()});
      MustInvoke({"eval", "--scores", (tag / "scores.tsv").string(), "--out-dir",
                  (tag / "report").string()});
      eer[idx++] = *ReadReportJsonl(tag / "report" / kReportJsonlFile).pooled.eer;
    }
    wins += eer[1] < eer[0];
    detail += (seed > 1 ? ", " : "") + std::string("seed ") + std::to_string(seed) + " " +
              Fmt("%.3f", eer[0]) + "->" + Fmt("%.3f", eer[1]);
  }
  Outcome o;
  o.pass = wins == 5;
  o.detail = std::to_string(wins) + "/5 seeds lower EER at 0 dB with p_noisy=0.5 (" + detail + ")";
  return o;
}

// ---------------------------------------------------------------------------
// 8. Report shape

Outcome ReportShape(const fs::path& work) {
  const FixtureLayout fx = MakeFixture(work / "fixture", 12, 2, 8, 2);
  const fs::path manifest = work / "manifest.jsonl";
  MustInvoke(ScanCommand(fx, manifest));
  MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (work / "train").string(),
              "--seed", "8", "--split", "train", "pnoisy-sweep", "0", "0.25", "0.5", "1"});
  MustInvoke({"build", "--manifest", manifest.string(), "--out-dir", (work / "clean").string(),
              "--seed", "8", "--split", "test", "--p-noisy", "0", "multicondition"});
  std::vector<std::string> snrs;
  for (double s : kBenchmarkSnrGridDb) snrs.push_back(FormatDouble(s));
  std::vector<std::string> build{"build", "--manifest", manifest.string(), "--out-dir",
                                 (work / "noisy").string(), "--seed", "8", "--split", "test",
                                 "fixed-snr"};
  build.insert(build.end(), snrs.begin(), snrs.end());
  MustInvoke(build);

  std::vector<std::string> eval_dirs{(work / "clean").string()};
  for (const auto& s : snrs) eval_dirs.push_back((work / "noisy" / ("snr_" + s)).string());
  std::vector<std::string> sweep{"sweep-report", "--out", (work / "sweep.csv").string()};
  std::vector<std::string> names;
  bool shape_ok = true;
  for (const char* p : {"0", "0.25", "0.5", "1"}) {
    const fs::path tag = work / (std::string("eval_") + p);
    std::vector<std::string> score{"score-baseline", "--train",
                                   (work / "train" / (std::string("p_") + p)).string(), "--seed",
                                   "1", "--epochs", "50", "--out", (tag / "scores.tsv").string(),
                                   "--eval"};
    score.insert(score.end(), eval_dirs.begin(), eval_dirs.end());
    MustInvoke(score);
    MustInvoke({"eval", "--scores", (tag / "scores.tsv").string(), "--out-dir",
                (tag / "report").string()});
    const MetricReport r = ReadReportJsonl(tag / "report" / kReportJsonlFile);
    std::vector<std::string> got;
    for (const auto& c : r.conditions) got.push_back(c.name);
    std::vector<std::string> want{"clean"};
    want.insert(want.end(), snrs.begin(), snrs.end());
    shape_ok = shape_ok && got == want;
    if (names.empty()) {
      for (const auto& g : got) names.push_back(g);
    }
    sweep.push_back("--entry");
    sweep.push_back(std::string(p) + "=" + (tag / "report" / kReportJsonlFile).string());
  }
  MustInvoke(sweep);
  std::ifstream in(work / "sweep.csv");
  std::vector<std::string> fractions;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#' || line.starts_with("p_noisy,")) continue;
    fractions.push_back(line.substr(0, line.find(',')));
  }
  const bool sweep_ok = fractions == std::vector<std::string>{"0", "0.25", "0.5", "1"};
  Outcome o;
  o.pass = shape_ok && sweep_ok && names.size() == 10;
  std::string order;
  for (const auto& n : names) order += (order.empty() ? "" : " ") + n;
  o.detail = std::to_string(names.size()) + " condition rows [" + order + "]; sweep rows " +
             std::to_string(fractions.size()) + " for 4 fractions";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const bool keep = argc > 1;
  const fs::path work = keep ? fs::path(argv[1])
                             : fs::temp_directory_path() /
                                   ("snrbench_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "SNR exactness", [&] { return SnrExactness(work / "c1"); }},
      {2, "split composition", [] { return SplitComposition(); }},
      {3, "determinism", [&] { return Determinism(work / "c3"); }},
      {4, "metric oracles", [] { return MetricOracles(); }},
      {5, "monotone-transform invariance", [] { return MonotoneInvariance(); }},
      {6, "LFCC and gradient checks", [] { return LfccAndGradient(); }},
      {7, "multi-condition direction", [&] { return MulticonditionDirection(work / "c7"); }},
      {8, "per-SNR report shape", [&] { return ReportShape(work / "c8"); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s  [%d] %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), Seconds(t0));
    std::fflush(stdout);
  }
  if (!keep) fs::remove_all(work);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
