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

// Writes the deterministic synthetic speech and noise corpus used by the
// tests and the README walkthrough.

#include <iostream>

#include "CLI11.hpp"
#include "snrbench/error.h"
#include "snrbench/synthetic_corpus.h"

int main(int argc, char** argv) {
  snrbench::FixtureOptions opts;
  CLI::App app{"Generate a synthetic speech and noise fixture corpus"};
  app.add_option("--out", opts.root, "Output directory")->required();
  app.add_option("--seed", opts.seed, "Generator seed")->capture_default_str();
  app.add_option("--train-per-class", opts.train_per_class)->capture_default_str();
  app.add_option("--dev-per-class", opts.dev_per_class)->capture_default_str();
  app.add_option("--test-per-class", opts.test_per_class)->capture_default_str();
  app.add_option("--noise-per-category", opts.noise_clips_per_category)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    const auto layout = snrbench::WriteFixtureCorpus(opts);
    std::cout << "speech: " << layout.speech_root.string() << "\n"
              << "noise: " << layout.noise_root.string() << "\n";
    for (const auto& [split, path] : layout.protocols) {
      std::cout << snrbench::ToString(split) << " protocol: " << path.string() << "\n";
    }
  } catch (const snrbench::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  return 0;
}
