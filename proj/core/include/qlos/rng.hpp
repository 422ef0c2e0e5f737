// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <cstdint>
#include <limits>

namespace qlos {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a master seed and up to two
/// counters (e.g. sweep point and frame index).
constexpr std::uint64_t stream_key(std::uint64_t master, std::uint64_t a,
                                   std::uint64_t b = 0) noexcept {
  std::uint64_t k = mix64(master + 0x9e3779b97f4a7c15ULL);
  k = mix64(k ^ (a * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  k = mix64(k ^ (b * 0xaef17502108ef2d9ULL + 0x2545f4914f6cdd1dULL));
  return k;
}

/// Counter-based generator: the i-th output is a pure function of
/// (key, i), so a frame's draws never depend on which worker ran it.
/// Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qlos
