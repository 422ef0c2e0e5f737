// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>

#include "qlos/errors.hpp"
#include "qlos/harness.hpp"
#include "qlos/quantizer.hpp"
#include "qlos/stats.hpp"

namespace qlos {
namespace {

using std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double mass(const Quantizer& q, std::size_t bin, double sigma2) {
  return cell_prob(0.0, 1.0 + sigma2, q.cell(bin));
}

TEST(Quantizer, EqualProbIqThresholds) {
  const auto q = design_equal_prob_iq(4, 0.1);
  ASSERT_EQ(q.thresholds().size(), 3u);
  EXPECT_NEAR(q.thresholds()[0], -0.5002, 1e-4);
  EXPECT_EQ(q.thresholds()[1], 0.0);
  EXPECT_NEAR(q.thresholds()[2], 0.5002, 1e-4);
  EXPECT_EQ(q.bin_count(), 16u);
  for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(mass(q, j, 0.1), 1.0 / 16, 1e-8);

  for (double s2 : {0.01, 1.0, 7.0}) {
    const auto sign = design_equal_prob_iq(2, s2);
    ASSERT_EQ(sign.thresholds().size(), 1u);
    EXPECT_EQ(sign.thresholds()[0], 0.0);
  }
}

TEST(Quantizer, EqualProbApThresholds) {
  const auto q = design_equal_prob_ap(2, 8, 0.1);
  ASSERT_EQ(q.thresholds().size(), 1u);
  EXPECT_NEAR(q.thresholds()[0], std::sqrt(1.1 * std::log(2.0)), 1e-12);
  EXPECT_NEAR(q.thresholds()[0], 0.8732, 1e-4);
  for (std::size_t j = 0; j < q.bin_count(); ++j) EXPECT_NEAR(mass(q, j, 0.1), 1.0 / 16, 1e-8);

  const auto k3 = design_equal_prob_ap(3, 4, 0.0);
  EXPECT_NEAR(k3.thresholds()[0], 0.6368, 1e-4);
  EXPECT_NEAR(k3.thresholds()[1], 1.0481, 1e-4);
  double prev = 0.0;
  for (double a : {k3.thresholds()[0], k3.thresholds()[1]}) {
    EXPECT_NEAR(1 - std::exp(-a * a) - prev, 1.0 / 3, 1e-12);
    prev = 1 - std::exp(-a * a);
  }

  const auto phase = design_equal_prob_ap(1, 8, 0.1);
  EXPECT_EQ(phase.family(), QuantizerFamily::phase_only);
  EXPECT_TRUE(phase.thresholds().empty());
}

TEST(Quantizer, PhaseOnlySectors) {
  const auto q = design_phase_only(8);
  EXPECT_EQ(q.bin_count(), 8u);
  EXPECT_EQ(q.index(std::polar(1.0, pi / 8)), 0u);
  for (int m = 0; m < 8; ++m) {
    const double a = (m + 0.5) * pi / 4;
    for (double r : {1e-3, 1.0, 50.0}) EXPECT_EQ(q.index(std::polar(r, a)), static_cast<std::size_t>(m));
  }
  EXPECT_EQ(q.index(cplx{-1.0, 0.0}), 4u);    // angle pi opens sector 4
  EXPECT_EQ(q.index(std::polar(1.0, -1e-9)), 7u);  // just below 2 pi
  EXPECT_EQ(q.index(cplx{1.0, -1e-300}), 0u);      // within 1e-12 of 2 pi: snaps upward
}

TEST(Quantizer, IndexExamples) {
  const auto q = design_equal_prob_iq(4, 0.1);
  // Re, Im in [0, 0.5002): interval index 2 on both axes.
  EXPECT_EQ(q.index({0.3, 0.3}), 2u * 4 + 2);
  const double t1 = q.thresholds()[0];
  EXPECT_EQ(q.index({t1, -5.0}), 1u * 4 + 0);       // on I_1 goes up
  EXPECT_EQ(q.index({std::nextafter(t1, -kInf), -5.0}), 0u);
  EXPECT_EQ(q.index({0.0, 0.0}), 2u * 4 + 2);

  const auto ap = Quantizer::amplitude_phase({1.0}, 8);
  EXPECT_EQ(ap.index(std::polar(1.5, pi / 8)), 1u * 8 + 0);
  EXPECT_EQ(ap.index(std::polar(0.5, pi / 8)), 0u);
  EXPECT_EQ(ap.index(cplx{1.0, 0.0}), 8u);  // amplitude exactly A_1 is outer

  EXPECT_THROW(q.index({kInf, 0.0}), InvalidInputError);
  EXPECT_THROW(q.index({std::nan(""), 0.0}), InvalidInputError);
}

// Region inequalities written out independently of Quantizer::index.
bool in_cell(const Cell& cell, cplx y) {
  if (const auto* r = std::get_if<RectCell>(&cell))
    return y.real() >= r->re_lo && y.real() < r->re_hi && y.imag() >= r->im_lo && y.imag() < r->im_hi;
  const auto& s = std::get<SectorCell>(cell);
  double a = std::atan2(y.imag(), y.real());
  if (a < 0) a += 2 * pi;
  if (a >= 2 * pi) a = 0;
  const double r = std::abs(y);
  return r >= s.r_lo && r < s.r_hi && a >= s.angle_lo && a < s.angle_hi;
}

TEST(Quantizer, Tiling) {
  const Quantizer qs[] = {design_equal_prob_iq(4, 0.1), design_equal_prob_ap(2, 8, 0.1),
                          design_phase_only(16), design_mmsqe_iq(8, 0.3)};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.5);
  for (const auto& q : qs) {
    for (int t = 0; t < 250000; ++t) {
      const cplx y{g(rng), g(rng)};
      const std::size_t j = q.index(y);
      int claims = 0;
      for (std::size_t b = 0; b < q.bin_count(); ++b) claims += in_cell(q.cell(b), y);
      ASSERT_EQ(claims, 1) << q.describe();
      ASSERT_TRUE(in_cell(q.cell(j), y)) << q.describe();
    }
  }
}

TEST(Quantizer, LloydMaxGaussianTable) {
  // Unit-variance axis: sigma2 = 1 gives (1 + sigma2) / 2 = 1.
  const auto q = design_mmsqe_iq(4, 1.0);
  ASSERT_EQ(q.thresholds().size(), 3u);
  EXPECT_NEAR(q.thresholds()[0], -0.9816, 1e-4);
  EXPECT_NEAR(q.thresholds()[1], 0.0, 1e-12);
  EXPECT_NEAR(q.thresholds()[2], 0.9816, 1e-4);
  EXPECT_EQ(design_mmsqe_iq(2, 0.4).thresholds()[0], 0.0);

  // Scales with the axis standard deviation.
  const auto q2 = design_mmsqe_iq(4, 0.1);
  EXPECT_NEAR(q2.thresholds()[2], 0.9816 * std::sqrt(0.55), 1e-4);
}

TEST(Quantizer, LloydMaxFixedPointConditions) {
  for (int s : {4, 8}) {
    const double s2 = 0.2;
    const auto q = design_mmsqe_iq(s, s2);
    const double sd = std::sqrt((1 + s2) / 2);
    std::vector<double> edges = {-kInf};
    for (double t : q.thresholds()) edges.push_back(t / sd);
    edges.push_back(kInf);
    for (std::size_t k = 1; k + 1 < edges.size(); ++k) {
      const double left = truncated_normal_mean(edges[k - 1], edges[k]);
      const double right = truncated_normal_mean(edges[k], edges[k + 1]);
      EXPECT_NEAR(edges[k], 0.5 * (left + right), 1e-8);
    }
  }
}

// Independent fixed-point iteration from three random starts agrees.
TEST(Quantizer, LloydMaxIndependentIteration) {
  const auto q = design_mmsqe_iq(4, 1.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int start = 0; start < 3; ++start) {
    std::vector<double> t = {u(rng), u(rng), u(rng)};
    std::sort(t.begin(), t.end());
    for (int it = 0; it < 20000; ++it) {
      std::vector<double> c(4);
      for (int k = 0; k < 4; ++k)
        c[static_cast<std::size_t>(k)] =
            truncated_normal_mean(k == 0 ? -kInf : t[static_cast<std::size_t>(k - 1)], k == 3 ? kInf : t[static_cast<std::size_t>(k)]);
      for (int k = 0; k < 3; ++k) t[static_cast<std::size_t>(k)] = 0.5 * (c[static_cast<std::size_t>(k)] + c[static_cast<std::size_t>(k + 1)]);
    }
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(t[static_cast<std::size_t>(k)], q.thresholds()[static_cast<std::size_t>(k)], 1e-7);
  }
}

TEST(Quantizer, MmsqeBeatsEqualProb) {
  for (double s2 : {0.01, 0.1, 1.0}) {
    EXPECT_LE(msqe(design_mmsqe_iq(4, s2), s2), msqe(design_equal_prob_iq(4, s2), s2) + 1e-12);
    EXPECT_LE(msqe(design_mmsqe_iq(8, s2), s2), msqe(design_equal_prob_iq(8, s2), s2) + 1e-12);
    EXPECT_LE(msqe(design_mmsqe_ap(2, 8, s2), s2), msqe(design_equal_prob_ap(2, 8, s2), s2) + 1e-12);
    EXPECT_LE(msqe(design_mmsqe_ap(4, 8, s2), s2), msqe(design_equal_prob_ap(4, 8, s2), s2) + 1e-12);
  }
}

TEST(Quantizer, CodebookProperties) {
  const double s2 = 0.1;
  auto q = design_equal_prob_iq(4, s2);
  q.attach_codebook(s2);
  ASSERT_EQ(q.codebook().size(), 16u);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < 16; ++j) acc += mass(q, j, s2) * q.reconstruction(j);
  EXPECT_NEAR(std::abs(acc), 0.0, 1e-8);

  const double sd = std::sqrt((1 + s2) / 2);
  const double inner = sd * truncated_normal_mean(0.0, std_normal_quantile(0.75));
  const double outer = sd * truncated_normal_mean(std_normal_quantile(0.75), kInf);
  EXPECT_NEAR(q.reconstruction(2 * 4 + 2).real(), inner, 1e-12);
  EXPECT_NEAR(q.reconstruction(3 * 4 + 3).real(), outer, 1e-12);
  EXPECT_NEAR(outer, 0.9427, 1e-4);

  // Closed under multiplication by j.
  for (std::size_t j = 0; j < 16; ++j) {
    const cplx rotated = cplx{0, 1} * q.reconstruction(j);
    double best = kInf;
    for (cplx c : q.codebook()) best = std::min(best, std::abs(c - rotated));
    EXPECT_LT(best, 1e-12);
  }

  auto ap = design_equal_prob_ap(2, 8, s2);
  ap.attach_codebook(s2);
  acc = 0.0;
  for (std::size_t j = 0; j < ap.bin_count(); ++j) acc += mass(ap, j, s2) * ap.reconstruction(j);
  EXPECT_NEAR(std::abs(acc), 0.0, 1e-8);
}

TEST(Quantizer, RefineSubsetAndChildren) {
  for (int s : {4, 8}) {
    const double s2 = 0.05;
    const auto phys = design_equal_prob_iq(s, s2);
    const auto vq = refine(phys, 2);
    EXPECT_EQ(vq.virt.bin_count(), static_cast<std::size_t>(4 * s * s));
    // Bit-identical physical thresholds inside the virtual set.
    for (double t : phys.thresholds())
      EXPECT_NE(std::find(vq.virt.thresholds().begin(), vq.virt.thresholds().end(), t),
                vq.virt.thresholds().end());
    ASSERT_EQ(vq.children.size(), phys.bin_count());
    for (const auto& ch : vq.children) EXPECT_EQ(ch.size(), 4u);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 100000; ++t) {
      const cplx y{g(rng), g(rng)};
      ASSERT_EQ(vq.coarsen_index(vq.virt.index(y)), phys.index(y));
    }
  }
  EXPECT_THROW(refine(design_equal_prob_ap(2, 8, 0.1)), UnsupportedFamilyError);
}

TEST(Quantizer, QuarterTurnSymmetry) {
  EXPECT_TRUE(design_equal_prob_iq(4, 0.1).quarter_turn_symmetric());
  EXPECT_TRUE(design_phase_only(8).quarter_turn_symmetric());
  EXPECT_FALSE(design_phase_only(6).quarter_turn_symmetric());
  EXPECT_FALSE(Quantizer::iq({-0.3, 0.5}).quarter_turn_symmetric());
}

TEST(Quantizer, DescribeRoundTrip) {
  const Quantizer qs[] = {design_equal_prob_iq(4, 0.1), design_mmsqe_iq(4, 0.1),
                          design_equal_prob_ap(2, 8, 0.1), design_mmsqe_ap(2, 8, 0.1),
                          design_phase_only(8), Quantizer::amplitude_phase({1.0}, 8),
                          Quantizer::iq({-0.5, 0.25})};
  for (const auto& q : qs) {
    const auto spec = SchemeSpec::parse(q.describe());
    EXPECT_EQ(spec.describe(), q.describe());
    const auto rebuilt = spec.build(0.1);
    ASSERT_EQ(rebuilt.thresholds().size(), q.thresholds().size());
    for (std::size_t k = 0; k < q.thresholds().size(); ++k)
      EXPECT_EQ(rebuilt.thresholds()[k], q.thresholds()[k]) << q.describe();
  }
}

TEST(Quantizer, InvalidConstruction) {
  EXPECT_THROW(Quantizer::iq({0.5, 0.1}), ConfigError);
  EXPECT_THROW(Quantizer::amplitude_phase({-1.0}, 8), ConfigError);
  EXPECT_THROW(design_equal_prob_iq(1, 0.1), ConfigError);
}

TEST(Quantizer, JsonExport) {
  auto q = design_equal_prob_iq(4, 0.1);
  q.attach_codebook(0.1);
  const std::string doc = quantizer_to_json(q);
  for (const char* key : {"\"family\"", "\"thresholds\"", "\"codebook\"", "\"design_sigma2\"", "\"levels\""})
    EXPECT_NE(doc.find(key), std::string::npos) << key;
}

}  // namespace
}  // namespace qlos
