// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "qlos/detection.hpp"
#include "qlos/harness.hpp"
#include "qlos/rng.hpp"

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Quantized observations of random frames at one SNR and phase.
std::vector<std::size_t> observations(const qlos::DetectionContext& ctx, double phi, int frames) {
  const int n = ctx.n();
  const auto& c = ctx.constellation();
  const auto h = ctx.channel(phi);
  qlos::CounterRng rng(qlos::stream_key(7, 0));
  std::normal_distribution<double> g(0.0, std::sqrt(ctx.sigma2() / 2));
  std::uniform_int_distribution<std::size_t> pick(0, c.size() - 1);
  std::vector<std::size_t> out;
  Eigen::VectorXcd x(n);
  for (int f = 0; f < frames; ++f) {
    for (int i = 0; i < n; ++i) x(i) = c.point(pick(rng));
    const Eigen::VectorXcd y = h.h * x;
    for (int i = 0; i < n; ++i) out.push_back(ctx.quantizer().index(y(i) + qlos::cplx{g(rng), g(rng)}));
  }
  return out;
}

struct Fixture {
  Fixture(qlos::Modulation mod, int s, double snr_db)
      : sigma2(std::pow(10.0, -snr_db / 10)),
        vq(qlos::refine(qlos::design_equal_prob_iq(s, sigma2), 2)),
        ctx(4, kHalfPi, qlos::Constellation(mod), physical(), sigma2) {
    vq.virt.attach_codebook(sigma2);
  }
  qlos::Quantizer physical() const {
    auto q = vq.physical;
    q.attach_codebook(sigma2);
    return q;
  }
  double sigma2;
  qlos::VirtualQuantizer vq;
  qlos::DetectionContext ctx;
};

constexpr int kFrames = 1024;

void BM_ZfDetect(benchmark::State& state) {
  const Fixture fx(qlos::Modulation::qpsk, 4, 20.0);
  const auto yq = observations(fx.ctx, 0.4, kFrames);
  std::vector<std::size_t> out(4);
  std::size_t f = 0;
  for (auto _ : state) {
    qlos::zf_detect(std::span(yq).subspan(4 * f, 4), fx.ctx, 0.4, out);
    benchmark::DoNotOptimize(out.data());
    f = (f + 1) % kFrames;
  }
}
BENCHMARK(BM_ZfDetect);

void BM_MlDetectVaryingPhase(benchmark::State& state) {
  const Fixture fx(qlos::Modulation::qpsk, 4, 14.0);
  const auto yq = observations(fx.ctx, 0.4, kFrames);
  qlos::MlDetector ml(fx.ctx);
  std::vector<std::size_t> out(4);
  std::size_t f = 0;
  double phi = 0.4;
  for (auto _ : state) {
    ml.detect(std::span(yq).subspan(4 * f, 4), phi, out);
    benchmark::DoNotOptimize(out.data());
    f = (f + 1) % kFrames;
    phi += 1e-3;
  }
}
BENCHMARK(BM_MlDetectVaryingPhase)->Unit(benchmark::kMicrosecond);

void BM_MlDetectFixedPhase(benchmark::State& state) {
  const Fixture fx(qlos::Modulation::qpsk, 4, 14.0);
  const auto yq = observations(fx.ctx, 0.0, kFrames);
  qlos::MlDetector ml(fx.ctx);
  std::vector<std::size_t> out(4);
  std::size_t f = 0;
  for (auto _ : state) {
    ml.detect(std::span(yq).subspan(4 * f, 4), 0.0, out);
    benchmark::DoNotOptimize(out.data());
    f = (f + 1) % kFrames;
  }
}
BENCHMARK(BM_MlDetectFixedPhase)->Unit(benchmark::kMicrosecond);

void BM_VqDetect(benchmark::State& state) {
  const auto mod = state.range(0) == 4 ? qlos::Modulation::qpsk : qlos::Modulation::qam16;
  const Fixture fx(mod, static_cast<int>(state.range(0)), 30.0);
  const auto yq = observations(fx.ctx, 0.4, kFrames);
  qlos::VqDetector vq(fx.ctx, fx.vq);
  std::vector<std::size_t> out(4);
  std::size_t f = 0;
  for (auto _ : state) {
    vq.detect(std::span(yq).subspan(4 * f, 4), 0.4, out);
    benchmark::DoNotOptimize(out.data());
    f = (f + 1) % kFrames;
  }
}
BENCHMARK(BM_VqDetect)->Arg(4)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_FrameLoop(benchmark::State& state) {
  const auto kind = static_cast<qlos::DetectorKind>(state.range(0));
  const Fixture fx(qlos::Modulation::qpsk, 4, 20.0);
  qlos::BerOptions opt;
  opt.frames = 8192;
  opt.threads = 1;
  for (auto _ : state)
    benchmark::DoNotOptimize(qlos::simulate_ber(fx.ctx, kind, &fx.vq, opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * opt.frames));
}
BENCHMARK(BM_FrameLoop)
    ->Arg(static_cast<int>(qlos::DetectorKind::zf))
    ->Arg(static_cast<int>(qlos::DetectorKind::vq))
    ->Unit(benchmark::kMillisecond);

}  // namespace
