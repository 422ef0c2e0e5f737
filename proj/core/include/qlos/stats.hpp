// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <complex>
#include <variant>

namespace qlos {

using cplx = std::complex<double>;

double std_normal_pdf(double x);
double std_normal_cdf(double x);

/// Standard normal quantile, accurate to better than 1e-12 in p.
/// Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// P(a <= Z < b) for standard normal Z; either bound may be infinite.
double normal_interval_prob(double a, double b);

/// E[Z | a <= Z < b]. Throws DegenerateError when the interval has zero mass.
double truncated_normal_mean(double a, double b);

/// Circular complex Gaussian CN(mean, variance) fitted to a received sample.
struct GaussianApprox {
  cplx mean{0.0, 0.0};
  double variance = 1.0;  // total over both real dimensions

  /// Moment-matched approximation for unit-energy inputs and noise sigma^2:
  /// zero mean, variance 1 + sigma^2.
  static GaussianApprox for_noise(double sigma2) { return {cplx{0.0, 0.0}, 1.0 + sigma2}; }
};

/// Half-open rectangle [re_lo, re_hi) x [im_lo, im_hi); bounds may be infinite.
struct RectCell {
  double re_lo, re_hi, im_lo, im_hi;
};

/// Annular sector r_lo <= |y| < r_hi, angle_lo <= arg y < angle_hi with angles
/// measured in [0, 2 pi). r_hi may be infinite.
struct SectorCell {
  double r_lo, r_hi, angle_lo, angle_hi;
};

using Cell = std::variant<RectCell, SectorCell>;

/// Default absolute tolerance for the sector quadratures.
inline constexpr double kSectorTolerance = 1e-9;

/// Mass of a rectangle under CN(mean, sigma2): product of two 1-D
/// interval probabilities with per-axis variance sigma2 / 2.
double rect_prob(cplx mean, double sigma2, const RectCell& cell);

/// Mass of an annular sector under CN(mean, sigma2). The radial integral is
/// closed form; the angular one is adaptive Gauss-Kronrod to `abs_tol`.
/// Throws NumericalError when the tolerance cannot be met.
double polar_prob(cplx mean, double sigma2, const SectorCell& cell,
                  double abs_tol = kSectorTolerance);

double cell_prob(cplx mean, double sigma2, const Cell& cell);

/// Conditional mean of `approx` over `cell`. Throws DegenerateError when the
/// cell mass is below 1e-12.
cplx cell_centroid(const GaussianApprox& approx, const Cell& cell);

}  // namespace qlos
