// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlos/channel.hpp"
#include "qlos/errors.hpp"
#include "qlos/infotheory.hpp"
#include "qlos/quantizer.hpp"

namespace qlos {
namespace {

using std::numbers::pi;

double sigma2_of(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

const Constellation& qpsk() {
  static const Constellation c(Modulation::qpsk);
  return c;
}

// Binary antipodal input +-a in real Gaussian noise of variance v, by a dense
// trapezoid rule over the output.
double bpsk_mi(double a, double v) {
  const double sd = std::sqrt(v);
  const double lo = -a - 12 * sd, hi = a + 12 * sd;
  const int steps = 40000;
  const double h = (hi - lo) / steps;
  double acc = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double y = lo + k * h;
    const double p1 = std::exp(-(y - a) * (y - a) / (2 * v));
    const double p0 = std::exp(-(y + a) * (y + a) / (2 * v));
    const double f = p1 / std::sqrt(2 * pi * v);
    // E over y | +a of log2(2 p1 / (p0 + p1)).
    const double term = f > 0 ? f * std::log2(2 * p1 / (p0 + p1)) : 0.0;
    acc += (k == 0 || k == steps ? 0.5 : 1.0) * term;
  }
  return acc * h;
}

TEST(Infotheory, InputEnumeration) {
  EXPECT_EQ(input_count(qpsk(), 4), 256u);
  std::size_t sym[4];
  input_symbols(27, 4, 4, sym);  // 27 = 0*64 + 1*16 + 2*4 + 3
  EXPECT_EQ(sym[0], 0u);
  EXPECT_EQ(sym[1], 1u);
  EXPECT_EQ(sym[2], 2u);
  EXPECT_EQ(sym[3], 3u);
}

TEST(Infotheory, TransitionRowsNormalized) {
  const Quantizer qs[] = {design_equal_prob_iq(4, 0.1), design_equal_prob_ap(2, 8, 0.1), design_phase_only(8)};
  for (const auto& q : qs) {
    const auto t = transition_table(q, los_channel(4, 1.2, 0.4), qpsk(), 0.1);
    for (int i = 0; i < 4; ++i)
      for (std::size_t x = 0; x < t.inputs(); ++x) {
        double s = 0.0;
        for (double p : t.row(i, x)) {
          EXPECT_GE(p, 0.0);
          s += p;
        }
        EXPECT_NEAR(s, 1.0, 1e-8) << q.describe();
      }
  }
}

TEST(Infotheory, TransitionRowsOneHotWhenNoiseless) {
  const auto q = design_equal_prob_iq(4, 0.1);
  const auto h = los_channel(4, pi / 2, 0.3);
  const auto t = transition_table(q, h, qpsk(), 1e-10);
  const auto means = noiseless_outputs(h, qpsk());
  for (int i = 0; i < 4; ++i)
    for (std::size_t x = 0; x < t.inputs(); ++x) {
      const cplx m = means[x * 4 + static_cast<std::size_t>(i)];
      if (q.near_boundary(m, 1e-3)) continue;
      EXPECT_NEAR(t(i, x, q.index(m)), 1.0, 1e-9);
    }
}

TEST(Infotheory, NoInformationAtVeryLowSnr) {
  MiOptions opt;
  opt.phi = PhiPolicy::fixed(0.3);
  const double s2 = sigma2_of(-40);
  const auto r = mi_quantized(design_equal_prob_iq(4, s2), 4, pi / 2, s2, qpsk(), opt);
  EXPECT_TRUE(r.exact);
  EXPECT_LT(r.mi_bits, 0.01);
  EXPECT_GE(r.mi_bits, -1e-12);
}

TEST(Infotheory, MiBounds) {
  MiOptions opt;
  opt.phi = PhiPolicy::grid(16);
  for (double snr : {0.0, 20.0, 40.0}) {
    const double s2 = sigma2_of(snr);
    const auto sign = mi_quantized(design_equal_prob_iq(2, s2), 2, 1.0, s2, qpsk(), opt);
    EXPECT_LE(sign.mi_bits, 4.0 + 1e-12);
    const auto p2 = mi_quantized(design_phase_only(2), 2, 1.0, s2, qpsk(), opt);
    EXPECT_LE(p2.mi_bits, 2.0 + 1e-12);  // n log2 T
    EXPECT_GE(p2.mi_bits, 0.0);
  }
}

TEST(Infotheory, PhaseOnlyFloor) {
  MiOptions opt;  // 256-point grid
  const double s2 = sigma2_of(40);
  const auto r = mi_quantized(design_phase_only(8), 2, 5 * pi / 12, s2, qpsk(), opt);
  EXPECT_NEAR(r.mi_bits, 3.5, 0.02);
}

TEST(Infotheory, AmplitudePhaseResolvesAmbiguity) {
  MiOptions opt;
  const double s2 = sigma2_of(40);
  const auto q = Quantizer::amplitude_phase({1.0}, 8);
  EXPECT_GE(mi_quantized(q, 2, 5 * pi / 12, s2, qpsk(), opt).mi_bits, 3.98);
  // At pi/2 some noiseless outputs sit exactly on the A_1 = 1 ring, so the
  // high-SNR value falls short of 4 by the boundary mass.
  const auto quarter = mi_quantized(q, 2, pi / 2, s2, qpsk(), opt);
  EXPECT_GT(quarter.mi_bits, 3.97);
  EXPECT_LT(quarter.mi_bits, 3.99);
  EXPECT_TRUE(noiseless_confusability(q, 2, pi / 2, 0.3, qpsk()).boundary_degenerate());
}

TEST(Infotheory, ConfusabilityPhaseOnlyPairs) {
  const auto conf = noiseless_confusability(design_phase_only(8), 2, 5 * pi / 12, pi / 4, qpsk());
  std::size_t pairs = 0, singles = 0;
  for (const auto& cls : conf.classes) {
    if (cls.size() == 2) ++pairs;
    if (cls.size() == 1) ++singles;
  }
  EXPECT_EQ(pairs, 4u);
  EXPECT_EQ(singles, 8u);
  EXPECT_EQ(conf.classes.size(), 12u);
  EXPECT_NEAR(conf.asymptotic_mi_bits, 3.5, 1e-12);
  EXPECT_FALSE(conf.boundary_degenerate());

  // Each pair is a swap (x1, x2) -> (x2, x1) or its negated version.
  for (const auto& cls : conf.classes) {
    if (cls.size() != 2) continue;
    const std::size_t a1 = cls[0] / 4, a2 = cls[0] % 4, b1 = cls[1] / 4, b2 = cls[1] % 4;
    const bool swap = a1 == b2 && a2 == b1;
    const bool neg_swap = (a1 + 2) % 4 == b2 && (a2 + 2) % 4 == b1;
    EXPECT_TRUE(swap || neg_swap);
  }
}

TEST(Infotheory, MoreSectorsDoNotHelp) {
  for (int a = 0; a < 16; ++a) {
    const double theta = (a + 0.5) * 2 * pi / 16;
    for (int b = 0; b < 32; ++b) {
      const double phi = (b + 0.37) * 2 * pi / 32;
      const auto m8 = noiseless_confusability(design_phase_only(8), 2, theta, phi, qpsk());
      const auto m16 = noiseless_confusability(design_phase_only(16), 2, theta, phi, qpsk());
      EXPECT_NEAR(m8.asymptotic_mi_bits, m16.asymptotic_mi_bits, 1e-12) << theta << " " << phi;
    }
  }
}

TEST(Infotheory, AmplitudeRingGivesSingletons) {
  const auto q = Quantizer::amplitude_phase({1.0}, 8);
  for (int a = 0; a < 16; ++a) {
    const double theta = (a + 0.5) * 2 * pi / 16;
    for (int b = 0; b < 32; ++b) {
      const double phi = (b + 0.37) * 2 * pi / 32;
      const auto conf = noiseless_confusability(q, 2, theta, phi, qpsk());
      EXPECT_EQ(conf.classes.size(), 16u) << theta << " " << phi;
      EXPECT_NEAR(conf.asymptotic_mi_bits, 4.0, 1e-12);
    }
  }
}

TEST(Infotheory, RefinementNeverLosesInformation) {
  MiOptions opt;
  opt.phi = PhiPolicy::grid(32);
  for (double snr : {0.0, 10.0, 20.0}) {
    const double s2 = sigma2_of(snr);
    for (int s : {2, 4}) {
      const auto vq = refine(design_equal_prob_iq(s, s2), 2);
      for (double theta : {0.7, pi / 2}) {
        const double coarse = mi_quantized(vq.physical, 2, theta, s2, qpsk(), opt).mi_bits;
        const double fine = mi_quantized(vq.virt, 2, theta, s2, qpsk(), opt).mi_bits;
        EXPECT_GE(fine, coarse - 1e-12) << snr << " " << s << " " << theta;
      }
    }
  }
}

TEST(Infotheory, EnumerationLimit) {
  MiOptions opt;
  opt.phi = PhiPolicy::fixed(0.0);
  const double s2 = 0.01;
  const auto q = design_equal_prob_iq(8, s2);  // 256 * 64^4 > 2^26
  EXPECT_THROW(mi_quantized(q, 4, pi / 2, s2, qpsk(), opt), CapacityEstimationError);
  opt.allow_monte_carlo = true;
  opt.mc_samples = 2000;
  const auto r = mi_quantized(q, 4, pi / 2, s2, qpsk(), opt);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.stderr_bits, 0.0);
  EXPECT_NEAR(r.mi_bits, 8.0, 0.1);
}

// Quantized Monte Carlo agrees with exact enumeration.
TEST(Infotheory, QuantizedMonteCarloMatchesExact) {
  MiOptions opt;
  opt.phi = PhiPolicy::grid(8);
  const double s2 = sigma2_of(8);
  const auto q = design_equal_prob_iq(4, s2);
  const auto exact = mi_quantized(q, 2, 1.1, s2, qpsk(), opt);
  opt.phi = PhiPolicy::uniform();
  opt.allow_monte_carlo = true;
  opt.mc_samples = 200000;
  const auto mc = mi_quantized(q, 2, 1.1, s2, qpsk(), opt);
  EXPECT_NEAR(mc.mi_bits, exact.mi_bits, 4 * mc.stderr_bits + 0.01);
}

TEST(Infotheory, UnquantizedMatchesIntegralOracle) {
  const double s2 = sigma2_of(5);
  const auto r = mi_unquantized(2, pi / 2, s2, qpsk(), PhiPolicy::fixed(0.0), 200000, 3);
  const double oracle = 4 * bpsk_mi(1 / std::sqrt(2.0), s2 / 2);
  EXPECT_LE(std::abs(r.mi_bits - oracle), 3 * r.stderr_bits) << r.mi_bits << " vs " << oracle;
}

TEST(Infotheory, UnquantizedPhaseInvariance) {
  const double s2 = sigma2_of(3);
  const auto a = mi_unquantized(2, 1.0, s2, qpsk(), PhiPolicy::fixed(0.0), 100000, 5);
  const auto b = mi_unquantized(2, 1.0, s2, qpsk(), PhiPolicy::fixed(pi / 3), 100000, 6);
  EXPECT_LE(std::abs(a.mi_bits - b.mi_bits), 3 * std::hypot(a.stderr_bits, b.stderr_bits));
}

TEST(Infotheory, UnquantizedLimits) {
  const auto high = mi_unquantized(4, pi / 2, sigma2_of(40), qpsk(), PhiPolicy::uniform(), 100000, 1);
  EXPECT_NEAR(high.mi_bits, 8.0, 0.02);
  const auto ten = mi_unquantized(4, pi / 2, sigma2_of(10), qpsk(), PhiPolicy::uniform(), 100000, 1);
  EXPECT_GE(ten.mi_bits, 7.9);
  const auto low = mi_unquantized(2, pi / 2, sigma2_of(-40), qpsk(), PhiPolicy::uniform(), 100000, 1);
  EXPECT_LT(low.mi_bits, 0.01);
  EXPECT_THROW(mi_unquantized(2, 1.0, 0.1, qpsk(), PhiPolicy::uniform(), 1000), ConfigError);
}

TEST(Infotheory, GapExamples) {
  const double s2 = sigma2_of(40);
  const auto unq = mi_unquantized(2, 5 * pi / 12, s2, qpsk(), PhiPolicy::grid(256), 100000, 2);
  const auto phase = mi_quantized(design_phase_only(8), 2, 5 * pi / 12, s2, qpsk());
  const auto ring = mi_quantized(Quantizer::amplitude_phase({1.0}, 8), 2, 5 * pi / 12, s2, qpsk());
  const auto g1 = mi_gap(unq, phase);
  const auto g2 = mi_gap(unq, ring);
  EXPECT_NEAR(g1.gap_bits, 0.5, 0.03);
  EXPECT_LT(g2.gap_bits, 0.05);
  EXPECT_GE(g2.gap_bits, -2 * g2.stderr_bits);

  for (double snr : {0.0, 6.0}) {
    const double v = sigma2_of(snr);
    const auto u = mi_unquantized(2, 1.0, v, qpsk(), PhiPolicy::grid(16), 100000, 4);
    MiOptions opt;
    opt.phi = PhiPolicy::grid(16);
    const auto q = mi_quantized(design_equal_prob_iq(2, v), 2, 1.0, v, qpsk(), opt);
    EXPECT_GE(mi_gap(u, q).gap_bits, -2 * u.stderr_bits);
    EXPECT_GT(u.mi_bits - q.mi_bits, -2 * u.stderr_bits);
  }
}

// Swapped neighbouring inputs give equal output phases on both antennas.
TEST(Infotheory, SwapPairsShareOutputPhase) {
  const auto& c = qpsk();
  for (double theta : {0.2, 1.0, -1.3})
    for (std::size_t i = 0; i < 4; ++i) {
      const auto h = los_channel(2, theta, 0.9);
      const cplx x1 = c.point(i), x2 = c.point((i + 1) % 4);
      const cplx y11 = h.h(0, 0) * x1 + h.h(0, 1) * x2, y21 = h.h(1, 0) * x1 + h.h(1, 1) * x2;
      const cplx y12 = h.h(0, 0) * x2 + h.h(0, 1) * x1;
      EXPECT_NEAR(std::remainder(std::arg(y11) - std::arg(y21), 2 * pi), 0.0, 1e-9);
      EXPECT_NEAR(std::remainder(std::arg(y11) - std::arg(y12), 2 * pi), 0.0, 1e-9);
    }
}

}  // namespace
}  // namespace qlos
