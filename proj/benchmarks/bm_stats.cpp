// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <benchmark/benchmark.h>

#include <numbers>

#include "qlos/quantizer.hpp"
#include "qlos/stats.hpp"

namespace {

void BM_PolarProb(benchmark::State& state) {
  const qlos::SectorCell cell{0.6, 1.2, 0.0, std::numbers::pi / 4};
  const qlos::cplx mean{0.7, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qlos::polar_prob(mean, 0.1, cell));
}
BENCHMARK(BM_PolarProb);

void BM_RectProb(benchmark::State& state) {
  const qlos::RectCell cell{-0.5, 0.0, 0.0, 0.5};
  const qlos::cplx mean{0.7, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qlos::rect_prob(mean, 0.1, cell));
}
BENCHMARK(BM_RectProb);

void BM_LloydMaxIq(benchmark::State& state) {
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qlos::design_mmsqe_iq(levels, 0.1));
}
BENCHMARK(BM_LloydMaxIq)->Arg(4)->Arg(8);

void BM_LloydMaxAp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(qlos::design_mmsqe_ap(2, 8, 0.1));
}
BENCHMARK(BM_LloydMaxAp);

void BM_QuantizerIndex(benchmark::State& state) {
  const auto q = qlos::design_equal_prob_iq(8, 0.1);
  qlos::cplx y{0.31, -0.77};
  for (auto _ : state) {
    benchmark::DoNotOptimize(q.index_unchecked(y));
    y *= qlos::cplx{0.9998, 0.02};
  }
}
BENCHMARK(BM_QuantizerIndex);

}  // namespace
