// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "qlos/constellation.hpp"
#include "qlos/rng.hpp"

namespace qlos {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Symmetric LoS link geometry. Lengths in meters, areas in m^2.
struct LosGeometry {
  double range_m = 100.0;
  double spacing_m = 0.33;
  double wavelength_m = kSpeedOfLight / 140e9;
  int array_size = 4;
  double nominal_range_m = 0.0;  // 0 means "same as range_m"
  std::optional<double> tx_area_m2;
  std::optional<double> rx_area_m2;

  static double wavelength_from_carrier_ghz(double f_ghz) { return kSpeedOfLight / (f_ghz * 1e9); }

  /// Throws ConfigError when a length is non-positive or array_size is not 2 or 4.
  void validate() const;
};

enum class CrossoverMode { exact, approximate };

/// Cross-over phase theta in [0, 2*pi): (2pi/lambda)(sqrt(R^2+d^2)-R) or pi d^2/(lambda R).
double crossover_phase(const LosGeometry& g, CrossoverMode mode = CrossoverMode::exact);

/// Inter-antenna spacing d for which the exact cross-over phase at `range_m`
/// equals `theta` (default pi/2).
double calibrate_spacing(double range_m, double wavelength_m, double theta);

/// Column-normalized LoS channel H(theta, phi) for a 2x2 or 4x4 array.
struct ChannelMatrix {
  int n = 0;
  double theta = 0.0;
  double phi = 0.0;
  Eigen::MatrixXcd h;
};

/// Throws ConfigError for n not in {2, 4}.
ChannelMatrix los_channel(int n, double theta, double phi);

/// Per-component complex noise variance sigma^2 (sigma^2/2 per real dimension).
struct NoiseSpec {
  double sigma2 = 1.0;

  static NoiseSpec from_snr_db(double snr_db);
  double snr_db() const;
};

/// Y = H x + N with N ~ CN(0, sigma^2 I). Throws InputShapeError when
/// x.size() != H.n.
std::vector<cplx> apply_channel(const ChannelMatrix& h, std::span<const cplx> x,
                                const NoiseSpec& noise, CounterRng& rng);

enum class DofKind { linear1d, planar2d };

/// Spatial degrees of freedom, L_T L_R/(R lambda) + 1 or A_T A_R/(R^2 lambda^2) + 1.
/// 1-D apertures use L = (n-1) d. Throws ConfigError when areas are missing for 2-D.
double dof_estimate(const LosGeometry& g, DofKind kind);

}  // namespace qlos
