// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <benchmark/benchmark.h>

#include <numbers>

#include "qlos/channel.hpp"
#include "qlos/infotheory.hpp"
#include "qlos/quantizer.hpp"

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void BM_TransitionTableIq(benchmark::State& state) {
  const qlos::Constellation c(qlos::Modulation::qpsk);
  const auto q = qlos::design_equal_prob_iq(4, 0.1);
  const auto h = qlos::los_channel(4, kHalfPi, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(qlos::transition_table(q, h, c, 0.1));
}
BENCHMARK(BM_TransitionTableIq)->Unit(benchmark::kMicrosecond);

void BM_TransitionTableAp(benchmark::State& state) {
  const qlos::Constellation c(qlos::Modulation::qpsk);
  const auto q = qlos::design_equal_prob_ap(2, 8, 0.1);
  const auto h = qlos::los_channel(4, kHalfPi, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(qlos::transition_table(q, h, c, 0.1));
}
BENCHMARK(BM_TransitionTableAp)->Unit(benchmark::kMillisecond);

void BM_MiQuantizedAt(benchmark::State& state) {
  const qlos::Constellation c(qlos::Modulation::qpsk);
  const auto q = qlos::design_equal_prob_iq(4, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(qlos::mi_quantized_at(q, 4, kHalfPi, 0.3, 0.1, c));
}
BENCHMARK(BM_MiQuantizedAt)->Unit(benchmark::kMillisecond);

void BM_MiQuantizedAtLowSnr(benchmark::State& state) {
  const qlos::Constellation c(qlos::Modulation::qpsk);
  const auto q = qlos::design_equal_prob_iq(4, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(qlos::mi_quantized_at(q, 4, kHalfPi, 0.3, 1.0, c));
}
BENCHMARK(BM_MiQuantizedAtLowSnr)->Unit(benchmark::kMillisecond);

}  // namespace
