// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qlos/channel.hpp"
#include "qlos/errors.hpp"

namespace qlos {
namespace {

using std::numbers::pi;

LosGeometry reference_geometry() {
  LosGeometry g;
  g.range_m = 100.0;
  g.spacing_m = 0.33;
  g.wavelength_m = LosGeometry::wavelength_from_carrier_ghz(140.0);
  return g;
}

TEST(Channel, CrossoverPhaseReference) {
  const LosGeometry g = reference_geometry();
  EXPECT_NEAR(g.wavelength_m, 2.1414e-3, 1e-7);
  const double exact = crossover_phase(g);
  EXPECT_NEAR(exact, 1.5977, 5e-4);  // 1.597 when truncated
  EXPECT_LT(std::abs(exact - crossover_phase(g, CrossoverMode::approximate)), 1e-5);
}

TEST(Channel, CrossoverPhaseVanishesWithSpacing) {
  LosGeometry g = reference_geometry();
  g.spacing_m = 1e-6;
  EXPECT_LT(crossover_phase(g), 1e-9);
  EXPECT_LT(crossover_phase(g, CrossoverMode::approximate), 1e-9);
}

TEST(Channel, CalibratedSpacingGivesExactTarget) {
  const double lambda = LosGeometry::wavelength_from_carrier_ghz(140.0);
  LosGeometry g = reference_geometry();
  g.spacing_m = calibrate_spacing(100.0, lambda, pi / 2);
  EXPECT_NEAR(crossover_phase(g), pi / 2, 1e-12);
  EXPECT_NEAR(g.spacing_m, 0.3272, 1e-4);
}

TEST(Channel, CrossoverMonotoneInRange) {
  LosGeometry g = reference_geometry();
  double prev = 1e9;
  for (double r = 80.0; r <= 120.0; r += 2.0) {
    g.range_m = r;
    const double t = crossover_phase(g);
    EXPECT_LT(t, prev);
    prev = t;
  }
}

TEST(Channel, ColumnNormsOnGrid) {
  for (int n : {2, 4})
    for (int a = 0; a <= 16; ++a)
      for (int b = 0; b < 14; ++b) {
        const auto h = los_channel(n, a * pi / 8, b * pi / 7);
        for (int k = 0; k < n; ++k) EXPECT_NEAR(h.h.col(k).norm(), 1.0, 1e-12);
      }
}

TEST(Channel, GramEntries) {
  for (double theta : {0.0, 0.4, pi / 2, 2.0, 5.5}) {
    const auto h = los_channel(4, theta, 0.7);
    const Eigen::MatrixXcd g = h.h.adjoint() * h.h;
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(std::abs(g(k, (k + 1) % 4) - std::cos(theta)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(g(k, (k + 2) % 4) - (1 + std::cos(2 * theta)) / 2), 0.0, 1e-12);
    }
  }
}

TEST(Channel, OrthogonalAtQuarterTurn) {
  for (double phi : {0.0, 1.1, 4.0}) {
    const auto h = los_channel(4, pi / 2, phi);
    EXPECT_LT((h.h.adjoint() * h.h - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-12);
    const auto h2 = los_channel(2, pi / 2, phi);
    EXPECT_LT((h2.h.adjoint() * h2.h - Eigen::MatrixXcd::Identity(2, 2)).norm(), 1e-12);
  }
}

TEST(Channel, TwoByTwoRankOneAtZero) {
  const auto h = los_channel(2, 0.0, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(h.h(i, k) - s), 0.0, 1e-15);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.h);
  EXPECT_LT(svd.singularValues()(1), 1e-12);
}

TEST(Channel, CommonPhaseIsGlobalFactor) {
  for (int n : {2, 4}) {
    const auto h0 = los_channel(n, 1.1, 0.0);
    const auto h1 = los_channel(n, 1.1, 2.3);
    EXPECT_LT((h1.h - std::polar(1.0, -2.3) * h0.h).norm(), 1e-13);
    Eigen::JacobiSVD<Eigen::MatrixXcd> s0(h0.h), s1(h1.h);
    EXPECT_LT((s0.singularValues() - s1.singularValues()).norm(), 1e-12);
  }
}

TEST(Channel, UnsupportedSize) {
  EXPECT_THROW(los_channel(3, 0.1, 0.0), ConfigError);
}

TEST(Channel, NoiseVarianceAndDeterminism) {
  const auto h = los_channel(4, pi / 2, 0.3);
  const std::vector<cplx> x = {1.0, cplx{0, 1}, -1.0, cplx{0, -1}};
  const Eigen::VectorXcd hx = h.h * Eigen::Map<const Eigen::VectorXcd>(x.data(), 4);
  const NoiseSpec noise = NoiseSpec::from_snr_db(3.0);
  CounterRng rng(stream_key(11, 0));
  double acc = 0.0;
  const int draws = 250000;  // 10^6 complex entries
  for (int t = 0; t < draws; ++t) {
    const auto y = apply_channel(h, x, noise, rng);
    for (int i = 0; i < 4; ++i) acc += std::norm(y[static_cast<std::size_t>(i)] - hx(i));
  }
  EXPECT_NEAR(acc / (4.0 * draws) / noise.sigma2, 1.0, 0.01);

  CounterRng a(stream_key(3, 1)), b(stream_key(3, 1));
  EXPECT_EQ(apply_channel(h, x, noise, a), apply_channel(h, x, noise, b));

  CounterRng c(stream_key(3, 2));
  const auto y = apply_channel(h, x, NoiseSpec{1e-300}, c);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(y[static_cast<std::size_t>(i)] - hx(i)), 0.0, 1e-15);

  EXPECT_THROW(apply_channel(h, std::vector<cplx>(3), noise, c), InputShapeError);
}

TEST(Channel, SnrConversion) {
  EXPECT_DOUBLE_EQ(NoiseSpec::from_snr_db(20.0).sigma2, 0.01);
  EXPECT_NEAR(NoiseSpec{0.1}.snr_db(), 10.0, 1e-12);
}

TEST(Channel, DofEstimates) {
  LosGeometry g = reference_geometry();
  g.array_size = 2;
  g.spacing_m = std::sqrt(g.range_m * g.wavelength_m);  // L_T L_R = R lambda
  EXPECT_NEAR(dof_estimate(g, DofKind::linear1d), 2.0, 1e-12);

  g.wavelength_m = 2.1414e-3;
  g.tx_area_m2 = 1.0;
  g.rx_area_m2 = 1.0;
  const double full = dof_estimate(g, DofKind::planar2d);
  EXPECT_NEAR(full - 1.0, 21.8, 0.05);
  g.wavelength_m /= 2;
  EXPECT_NEAR(dof_estimate(g, DofKind::planar2d) - 1.0, 4 * (full - 1.0), 1e-9);

  g.rx_area_m2.reset();
  EXPECT_THROW(dof_estimate(g, DofKind::planar2d), ConfigError);
}

TEST(Channel, GeometryValidation) {
  LosGeometry g = reference_geometry();
  g.range_m = -1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = reference_geometry();
  g.array_size = 3;
  EXPECT_THROW(g.validate(), ConfigError);
}

}  // namespace
}  // namespace qlos
