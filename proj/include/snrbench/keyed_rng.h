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

#ifndef SNRBENCH_KEYED_RNG_H_
#define SNRBENCH_KEYED_RNG_H_

#include <cstdint>
#include <string_view>

namespace snrbench {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// 64-bit FNV-1a over bytes.
constexpr std::uint64_t HashString(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Combines a parent seed with a sub-key into a child seed.
constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t key) {
  return Mix64(parent ^ Mix64(key + 0x632BE59BD9B4E019ull));
}

constexpr std::uint64_t DeriveSeed(std::uint64_t parent, std::string_view key) {
  return DeriveSeed(parent, HashString(key));
}

/// Counter-based random stream: draw i is a pure function of (key, i), so a
/// stream keyed on (seed, utterance id) yields the same values no matter how
/// many other streams were consumed before it or in which order.
class KeyedStream {
 public:
  explicit constexpr KeyedStream(std::uint64_t key) : key_(key) {}
  KeyedStream(std::uint64_t seed, std::string_view id)
      : key_(DeriveSeed(seed, id)) {}

  constexpr std::uint64_t NextU64() {
    return Mix64(key_ ^ Mix64(counter_++));
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double NextUniform() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n); n must be positive. Rejection sampling keeps
  /// the result exactly uniform.
  constexpr std::uint64_t NextBelow(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = NextU64();
    while (v >= limit) v = NextU64();
    return v % n;
  }

  constexpr bool NextBernoulli(double p) { return NextUniform() < p; }

  constexpr std::uint64_t key() const { return key_; }
  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace snrbench

#endif  // SNRBENCH_KEYED_RNG_H_
