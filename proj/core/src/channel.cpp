// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qlos/errors.hpp"

namespace qlos {

using std::numbers::pi;

void LosGeometry::validate() const {
  if (!(range_m > 0.0)) throw ConfigError("range_m must be positive");
  if (!(spacing_m > 0.0)) throw ConfigError("spacing_m must be positive");
  if (!(wavelength_m > 0.0)) throw ConfigError("wavelength must be positive");
  if (array_size != 2 && array_size != 4)
    throw ConfigError("array_size must be 2 or 4, got " + std::to_string(array_size));
}

namespace {

double wrap_two_pi(double a) {
  double r = std::fmod(a, 2.0 * pi);
  if (r < 0.0) r += 2.0 * pi;
  if (r >= 2.0 * pi) r = 0.0;
  return r;
}

}  // namespace

double crossover_phase(const LosGeometry& g, CrossoverMode mode) {
  g.validate();
  const double r = g.range_m;
  const double d = g.spacing_m;
  double theta;
  if (mode == CrossoverMode::exact) {
    // sqrt(R^2+d^2) - R without cancellation.
    const double path_diff = d * d / (std::hypot(r, d) + r);
    theta = 2.0 * pi / g.wavelength_m * path_diff;
  } else {
    theta = pi * d * d / (g.wavelength_m * r);
  }
  return wrap_two_pi(theta);
}

double calibrate_spacing(double range_m, double wavelength_m, double theta) {
  if (!(range_m > 0.0) || !(wavelength_m > 0.0) || !(theta > 0.0))
    throw ConfigError("calibrate_spacing: range, wavelength and theta must be positive");
  // sqrt(R^2+d^2) = R + a with a = theta lambda / (2 pi).
  const double a = theta * wavelength_m / (2.0 * pi);
  return std::sqrt(a * (2.0 * range_m + a));
}

ChannelMatrix los_channel(int n, double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw InvalidInputError("los_channel: non-finite theta or phi");
  ChannelMatrix out{n, theta, phi, Eigen::MatrixXcd(n, n)};
  const cplx common = std::polar(1.0, -phi);
  if (n == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        out.h(i, k) = s * common * std::polar(1.0, -theta * (i == k ? 0 : 1));
  } else if (n == 4) {
    // Antennas on a square; path-order m(i,k) is 0 (same), 1 (adjacent), 2 (diagonal).
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) {
        const int diff = std::abs(i - k);
        const int m = std::min(diff, 4 - diff);
        out.h(i, k) = 0.5 * common * std::polar(1.0, -theta * m);
      }
    }
  } else {
    throw ConfigError("los_channel: array size must be 2 or 4, got " + std::to_string(n));
  }
  return out;
}

NoiseSpec NoiseSpec::from_snr_db(double snr_db) {
  return NoiseSpec{std::pow(10.0, -snr_db / 10.0)};
}

double NoiseSpec::snr_db() const { return -10.0 * std::log10(sigma2); }

std::vector<cplx> apply_channel(const ChannelMatrix& h, std::span<const cplx> x,
                                const NoiseSpec& noise, CounterRng& rng) {
  if (static_cast<int>(x.size()) != h.n)
    throw InputShapeError("apply_channel: expected " + std::to_string(h.n) + " symbols, got " +
                          std::to_string(x.size()));
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise.sigma2 / 2.0));
  std::vector<cplx> y(static_cast<std::size_t>(h.n));
  for (int i = 0; i < h.n; ++i) {
    cplx acc = 0.0;
    for (int k = 0; k < h.n; ++k) acc += h.h(i, k) * x[static_cast<std::size_t>(k)];
    const double re = gauss(rng);
    const double im = gauss(rng);
    y[static_cast<std::size_t>(i)] = acc + cplx(re, im);
  }
  return y;
}

double dof_estimate(const LosGeometry& g, DofKind kind) {
  g.validate();
  if (kind == DofKind::linear1d) {
    const double len = (g.array_size - 1) * g.spacing_m;
    return len * len / (g.range_m * g.wavelength_m) + 1.0;
  }
  if (!g.tx_area_m2 || !g.rx_area_m2)
    throw ConfigError("dof_estimate: planar arrays need tx_area_m2 and rx_area_m2");
  const double rl = g.range_m * g.wavelength_m;
  return (*g.tx_area_m2) * (*g.rx_area_m2) / (rl * rl) + 1.0;
}

}  // namespace qlos
