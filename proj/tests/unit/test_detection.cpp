// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qlos/detection.hpp"
#include "qlos/errors.hpp"
#include "qlos/infotheory.hpp"
#include "qlos/rng.hpp"

namespace qlos {
namespace {

using std::numbers::pi;

Quantizer with_codebook(Quantizer q, double sigma2) {
  q.attach_codebook(sigma2);
  return q;
}

struct Rig {
  Rig(Modulation mod, int s, double sigma2, double theta = pi / 2)
      : c(mod),
        vq(refine(design_equal_prob_iq(s, sigma2), 2)),
        ctx(4, theta, c, with_codebook(vq.physical, sigma2), sigma2) {
    vq.virt.attach_codebook(sigma2);
  }
  Constellation c;
  VirtualQuantizer vq;
  DetectionContext ctx;
};

std::vector<std::size_t> symbols_of(std::size_t x, std::size_t alphabet, int n) {
  std::vector<std::size_t> s(static_cast<std::size_t>(n));
  input_symbols(x, alphabet, n, s);
  return s;
}

std::vector<std::size_t> observe(const DetectionContext& ctx, std::span<const std::size_t> sym,
                                 double phi, CounterRng* rng) {
  const int n = ctx.n();
  const auto h = ctx.channel(phi);
  std::normal_distribution<double> g(0.0, std::sqrt(ctx.sigma2() / 2));
  std::vector<std::size_t> yq(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cplx y = 0.0;
    for (int k = 0; k < n; ++k) y += h.h(i, k) * ctx.constellation().point(sym[static_cast<std::size_t>(k)]);
    if (rng) y += cplx{g(*rng), g(*rng)};
    yq[static_cast<std::size_t>(i)] = ctx.quantizer().index(y);
  }
  return yq;
}

TEST(Detection, ZfFilterInvertsChannel) {
  const Constellation c(Modulation::qpsk);
  for (double theta : {0.3, 1.0, pi / 2, 2.5}) {
    const DetectionContext ctx(4, theta, c, design_equal_prob_iq(4, 0.1), 0.1);
    EXPECT_LT((ctx.zf0() * ctx.h0() - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-10) << theta;
  }
  const DetectionContext quarter(4, pi / 2, c, design_equal_prob_iq(4, 0.1), 0.1);
  EXPECT_LT((quarter.zf0() - quarter.h0().adjoint()).norm(), 1e-12);
  EXPECT_THROW(DetectionContext(4, 0.0, c, design_equal_prob_iq(4, 0.1), 0.1), DegenerateError);
}

TEST(Detection, ZfOnNoiselessSamplesRecoversInput) {
  const Rig s(Modulation::qpsk, 4, 1e-6);
  std::vector<std::size_t> out(4);
  for (std::size_t x = 0; x < 256; ++x) {
    const auto sym = symbols_of(x, 4, 4);
    const auto h = s.ctx.channel(0.7);
    std::vector<cplx> y(4, 0.0);
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) y[static_cast<std::size_t>(i)] += h.h(i, k) * s.c.point(sym[static_cast<std::size_t>(k)]);
    zf_detect_samples(y, s.ctx, 0.7, out);
    EXPECT_EQ(out, sym);
  }
}

TEST(Detection, ZfUsesCentroidsAndPerStreamSlicing) {
  const Rig s(Modulation::qpsk, 4, 0.05, 1.2);
  CounterRng rng(stream_key(4, 4));
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  for (int f = 0; f < 500; ++f) {
    std::vector<std::size_t> sym = {pick(rng), pick(rng), pick(rng), pick(rng)};
    const double phi = 0.01 * f;
    const auto yq = observe(s.ctx, sym, phi, &rng);
    Eigen::VectorXcd yhat(4);
    for (int i = 0; i < 4; ++i) yhat(i) = s.ctx.quantizer().reconstruction(yq[static_cast<std::size_t>(i)]);
    const Eigen::MatrixXcd w = s.ctx.h0().completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::VectorXcd xt = std::polar(1.0, phi) * (w * yhat);
    const auto got = zf_detect(yq, s.ctx, phi);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(got[static_cast<std::size_t>(k)], s.c.slice(xt(k)));
  }
}

TEST(Detection, MlNoiselessRecovery) {
  const Rig s(Modulation::qpsk, 4, 1e-6);
  EXPECT_EQ(s.ctx.inputs(), 256u);
  const double phi = 0.3;
  const auto conf = noiseless_confusability(s.ctx.quantizer(), 4, pi / 2, phi, s.c);
  ASSERT_EQ(conf.classes.size(), 256u);
  MlDetector ml(s.ctx);
  std::vector<std::size_t> out(4);
  for (std::size_t x = 0; x < 256; ++x) {
    const auto sym = symbols_of(x, 4, 4);
    ml.detect(observe(s.ctx, sym, phi, nullptr), phi, out);
    EXPECT_EQ(out, sym);
  }
}

// Brute-force argmax of summed log bin probabilities from the transition table.
TEST(Detection, MlMatchesTransitionTableArgmax) {
  const Rig s(Modulation::qpsk, 4, 0.2, 1.1);
  MlDetector ml(s.ctx);
  CounterRng rng(stream_key(8, 1));
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  std::vector<std::size_t> out(4);
  for (int f = 0; f < 200; ++f) {
    const double phi = 2 * pi * rng.uniform();
    const std::vector<std::size_t> sym = {pick(rng), pick(rng), pick(rng), pick(rng)};
    const auto yq = observe(s.ctx, sym, phi, &rng);
    const auto table = transition_table(s.ctx.quantizer(), s.ctx.channel(phi), s.c, s.ctx.sigma2());
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_x = 0;
    for (std::size_t x = 0; x < 256; ++x) {
      double ll = 0.0;
      for (int i = 0; i < 4; ++i) ll += std::log(std::max(table(i, x, yq[static_cast<std::size_t>(i)]), 1e-300));
      EXPECT_NEAR(ml.log_likelihood(yq, phi, x), ll, 1e-9 * std::max(1.0, std::abs(ll)));
      if (x == 0 || ll > best + 1e-12 * std::max(1.0, std::abs(best))) {
        best = ll;
        best_x = x;
      }
    }
    ml.detect(yq, phi, out);
    EXPECT_EQ(out, symbols_of(best_x, 4, 4));
  }
}

TEST(Detection, MlTieGoesToLowestIndex) {
  const Constellation c(Modulation::qpsk);
  const double sigma2 = 1e-6;
  const double theta = 5 * pi / 12, phi = pi / 4;
  const DetectionContext ctx(2, theta, c, design_phase_only(8), sigma2);
  MlDetector ml(ctx);
  std::vector<std::size_t> out(2);
  for (std::size_t i = 0; i < 4; ++i) {
    const std::vector<std::size_t> a = {i, (i + 1) % 4};
    const std::vector<std::size_t> b = {(i + 1) % 4, i};
    const auto yq = observe(ctx, a, phi, nullptr);
    ASSERT_EQ(yq, observe(ctx, b, phi, nullptr));
    const std::size_t xa = ctx.vector_index(a), xb = ctx.vector_index(b);
    EXPECT_NEAR(ml.log_likelihood(yq, phi, xa), ml.log_likelihood(yq, phi, xb), 1e-9);
    ml.detect(yq, phi, out);
    EXPECT_EQ(ctx.vector_index(out), std::min(xa, xb));
  }
}

TEST(Detection, MlLargeGate) {
  const Constellation c(Modulation::qam16);
  const DetectionContext ctx(4, pi / 2, c, design_equal_prob_iq(8, 0.01), 0.01);
  EXPECT_THROW(MlDetector{ctx}, ConfigError);
  EXPECT_NO_THROW(MlDetector(ctx, true));
}

TEST(Detection, CandidateSetSizes) {
  for (auto [mod, s] : {std::pair{Modulation::qpsk, 4}, std::pair{Modulation::qam16, 8}}) {
    const Rig st(mod, s, 0.01);
    CounterRng rng(stream_key(1, 2));
    std::uniform_int_distribution<std::size_t> pick(0, st.c.size() - 1);
    for (int f = 0; f < 50; ++f) {
      const std::vector<std::size_t> sym = {pick(rng), pick(rng), pick(rng), pick(rng)};
      const auto yq = observe(st.ctx, sym, 0.4, &rng);
      const auto t = build_candidate_set(yq, st.vq);
      ASSERT_EQ(t.size(), 256u);
      for (std::size_t k = 0; k < t.size(); k += 17) {
        const auto m = t.member(k);
        for (int i = 0; i < 4; ++i) EXPECT_EQ(st.vq.coarsen_index(m[static_cast<std::size_t>(i)]), yq[static_cast<std::size_t>(i)]);
      }
    }
  }
}

// Candidate-by-candidate reference: ZF on virtual centroids, slice, re-quantize
// the noiseless output, score; strict minimum so the lowest t wins ties.
std::vector<std::size_t> vq_reference(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                      const VirtualQuantizer& vq, double phi) {
  const auto t = build_candidate_set(yq, vq);
  const auto h = ctx.channel(phi);
  const Eigen::MatrixXcd w = std::polar(1.0, phi) * ctx.zf0();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_x;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto m = t.member(k);
    Eigen::VectorXcd yv(4);
    for (int i = 0; i < 4; ++i) yv(i) = vq.virt.reconstruction(m[static_cast<std::size_t>(i)]);
    const Eigen::VectorXcd xt = w * yv;
    std::vector<std::size_t> xhat(4);
    Eigen::VectorXcd xv(4);
    for (int i = 0; i < 4; ++i) {
      xhat[static_cast<std::size_t>(i)] = ctx.constellation().slice(xt(i));
      xv(i) = ctx.constellation().point(xhat[static_cast<std::size_t>(i)]);
    }
    const Eigen::VectorXcd hx = h.h * xv;
    double score = 0.0;
    for (int i = 0; i < 4; ++i) score += std::norm(yv(i) - vq.virt.reconstruction(vq.virt.index(hx(i))));
    if (score < best) {
      best = score;
      best_x = xhat;
    }
  }
  return best_x;
}

TEST(Detection, VqMatchesReference) {
  for (auto [mod, s, snr] : {std::tuple{Modulation::qpsk, 4, 25.0}, std::tuple{Modulation::qam16, 8, 30.0}}) {
    const Rig st(mod, s, std::pow(10.0, -snr / 10));
    VqDetector det(st.ctx, st.vq);
    CounterRng rng(stream_key(2, 9));
    std::uniform_int_distribution<std::size_t> pick(0, st.c.size() - 1);
    std::vector<std::size_t> out(4);
    for (int f = 0; f < 150; ++f) {
      const double phi = 2 * pi * rng.uniform();
      const std::vector<std::size_t> sym = {pick(rng), pick(rng), pick(rng), pick(rng)};
      const auto yq = observe(st.ctx, sym, phi, &rng);
      det.detect(yq, phi, out);
      EXPECT_EQ(out, vq_reference(yq, st.ctx, st.vq, phi)) << to_string(mod) << " frame " << f;
    }
  }
}

TEST(Detection, VqWorkIsCandidateCountTimesStreams) {
  for (auto [mod, s] : {std::pair{Modulation::qpsk, 4}, std::pair{Modulation::qam16, 8}}) {
    const Rig st(mod, s, 0.01);
    VqDetector det(st.ctx, st.vq);
    std::vector<std::size_t> out(4);
    const std::vector<std::size_t> sym = {0, 1, 2, 3};
    const int frames = 10;
    for (int f = 0; f < frames; ++f) det.detect(observe(st.ctx, sym, 0.1 * f, nullptr), 0.1 * f, out);
    EXPECT_EQ(det.stats().candidates, 256u * frames);
    EXPECT_EQ(det.stats().slice_calls, 256u * 4 * frames);
  }
}

TEST(Detection, VqNoiselessConsistency) {
  const Rig s(Modulation::qpsk, 4, 1e-6);
  VqDetector det(s.ctx, s.vq);
  std::vector<std::size_t> out(4);
  for (std::size_t x = 0; x < 256; ++x) {
    const auto sym = symbols_of(x, 4, 4);
    det.detect(observe(s.ctx, sym, 0.0, nullptr), 0.0, out);
    EXPECT_EQ(out, sym);
  }
}

TEST(Detection, Deterministic) {
  const Rig s(Modulation::qpsk, 4, 0.05);
  CounterRng rng(stream_key(6, 6));
  const auto yq = observe(s.ctx, std::vector<std::size_t>{1, 2, 3, 0}, 0.8, &rng);
  EXPECT_EQ(vq_detect(yq, s.ctx, s.vq, 0.8), vq_detect(yq, s.ctx, s.vq, 0.8));
  EXPECT_EQ(ml_detect(yq, s.ctx, 0.8), ml_detect(yq, s.ctx, 0.8));
  EXPECT_EQ(zf_detect(yq, s.ctx, 0.8), zf_detect(yq, s.ctx, 0.8));
}

}  // namespace
}  // namespace qlos
