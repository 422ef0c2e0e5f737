// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/stats.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qlos/errors.hpp"
#include "qlos/quadrature.hpp"

namespace qlos {

using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
constexpr double kSqrtPi = 1.772453850905516027298167483341;

// erf(x1) - erf(x0) without cancellation in the tails.
double erf_diff(double x0, double x1) {
  if (x0 >= 0.0) return std::erfc(x0) - std::erfc(x1);
  if (x1 <= 0.0) return std::erfc(-x1) - std::erfc(-x0);
  return std::erf(x1) - std::erf(x0);
}

// Split points that put the angular peak of a concentrated density inside
// its own subintervals.
std::vector<double> peak_breaks(cplx mean, double sigma2, double lo, double hi) {
  std::vector<double> out;
  const double m = std::abs(mean);
  if (m <= 0.0) return out;
  const double width = std::sqrt(sigma2) / m;
  if (width > 0.5) return out;
  const double psi = std::arg(mean);
  for (double turn : {-2.0 * pi, 0.0, 2.0 * pi}) {
    for (double k : {-12.0, -6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0, 12.0}) {
      const double a = psi + turn + k * width;
      if (a > lo && a < hi) out.push_back(a);
    }
  }
  return out;
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / sqrt2); }

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  if (p > 0.5) return -std_normal_quantile(1.0 - p);
  if (p == 0.5) return 0.0;

  // Acklam's rational approximation (lower region and central region).
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // Halley refinement against the erfc-based cdf; two steps reach round-off.
  for (int it = 0; it < 2; ++it) {
    const double e = std_normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double normal_interval_prob(double a, double b) {
  if (!(a < b)) return 0.0;
  if (a >= 0.0) return 0.5 * (std::erfc(a / sqrt2) - std::erfc(b / sqrt2));
  if (b <= 0.0) return 0.5 * (std::erfc(-b / sqrt2) - std::erfc(-a / sqrt2));
  return 1.0 - 0.5 * std::erfc(-a / sqrt2) - 0.5 * std::erfc(b / sqrt2);
}

double truncated_normal_mean(double a, double b) {
  const double mass = normal_interval_prob(a, b);
  if (!(mass > 0.0)) throw DegenerateError("truncated_normal_mean: interval has zero probability");
  const double pa = std::isfinite(a) ? std_normal_pdf(a) : 0.0;
  const double pb = std::isfinite(b) ? std_normal_pdf(b) : 0.0;
  return (pa - pb) / mass;
}

double rect_prob(cplx mean, double sigma2, const RectCell& cell) {
  const double sd = std::sqrt(sigma2 / 2.0);
  const double px = normal_interval_prob((cell.re_lo - mean.real()) / sd, (cell.re_hi - mean.real()) / sd);
  if (px == 0.0) return 0.0;
  return px * normal_interval_prob((cell.im_lo - mean.imag()) / sd, (cell.im_hi - mean.imag()) / sd);
}

namespace {

// Integrand pieces along the ray at angle `alpha`. With b = Re(mean e^{-j alpha})
// and c = Im(mean e^{-j alpha}), |r e^{j alpha} - mean|^2 = (r - b)^2 + c^2 and
// the radial integrals of r f and r^2 f have closed forms.
struct RayTerms {
  double mass;    // integral of f(r, alpha) r dr over [r_lo, r_hi)
  double moment;  // integral of f(r, alpha) r^2 dr
};

RayTerms ray_terms(cplx mean, double sigma2, double r_lo, double r_hi, double alpha,
                   bool want_moment) {
  const double s = std::sqrt(sigma2);
  const cplx rot = mean * std::polar(1.0, -alpha);
  const double b = rot.real();
  const double c2 = rot.imag() * rot.imag();
  const double e_lo = std::exp(-((r_lo - b) * (r_lo - b) + c2) / sigma2);
  const double e_hi = std::isfinite(r_hi) ? std::exp(-((r_hi - b) * (r_hi - b) + c2) / sigma2) : 0.0;
  const double ec = std::exp(-c2 / sigma2);
  const double u_hi = std::isfinite(r_hi) ? (r_hi - b) / s : std::numeric_limits<double>::infinity();
  const double ed = ec == 0.0 ? 0.0 : erf_diff((r_lo - b) / s, u_hi);

  RayTerms t{};
  t.mass = (e_lo - e_hi) / (2.0 * pi) + b / (2.0 * kSqrtPi * s) * ec * ed;
  if (want_moment) {
    const double hi_term = std::isfinite(r_hi) ? (r_hi + b) * e_hi : 0.0;
    t.moment = ((r_lo + b) * e_lo - hi_term) / (2.0 * pi) +
               (0.5 * sigma2 + b * b) / (2.0 * kSqrtPi * s) * ec * ed;
  }
  return t;
}

void check_sector(const SectorCell& cell) {
  if (!(cell.r_lo >= 0.0) || !(cell.r_hi > cell.r_lo))
    throw DomainError("sector cell: need 0 <= r_lo < r_hi");
  if (!(cell.angle_hi > cell.angle_lo) || cell.angle_hi - cell.angle_lo > 2.0 * pi + 1e-12)
    throw DomainError("sector cell: angular width must lie in (0, 2 pi]");
}

}  // namespace

double polar_prob(cplx mean, double sigma2, const SectorCell& cell, double abs_tol) {
  check_sector(cell);
  const auto breaks = peak_breaks(mean, sigma2, cell.angle_lo, cell.angle_hi);
  const auto res = integrate_adaptive<1>(
      [&](double alpha) {
        return std::array<double, 1>{ray_terms(mean, sigma2, cell.r_lo, cell.r_hi, alpha, false).mass};
      },
      cell.angle_lo, cell.angle_hi, abs_tol, breaks);
  return std::max(0.0, res.value[0]);
}

double cell_prob(cplx mean, double sigma2, const Cell& cell) {
  if (const auto* r = std::get_if<RectCell>(&cell)) return rect_prob(mean, sigma2, *r);
  return polar_prob(mean, sigma2, std::get<SectorCell>(cell));
}

cplx cell_centroid(const GaussianApprox& approx, const Cell& cell) {
  constexpr double kMinMass = 1e-12;
  if (const auto* r = std::get_if<RectCell>(&cell)) {
    const double sd = std::sqrt(approx.variance / 2.0);
    const cplx mu = approx.mean;
    const double mass = rect_prob(mu, approx.variance, *r);
    if (!(mass > kMinMass)) throw DegenerateError("cell_centroid: cell probability below 1e-12");
    const double re = mu.real() + sd * truncated_normal_mean((r->re_lo - mu.real()) / sd,
                                                             (r->re_hi - mu.real()) / sd);
    const double im = mu.imag() + sd * truncated_normal_mean((r->im_lo - mu.imag()) / sd,
                                                             (r->im_hi - mu.imag()) / sd);
    return {re, im};
  }
  const auto& sec = std::get<SectorCell>(cell);
  check_sector(sec);
  const auto breaks = peak_breaks(approx.mean, approx.variance, sec.angle_lo, sec.angle_hi);
  const auto res = integrate_adaptive<3>(
      [&](double alpha) {
        const RayTerms t = ray_terms(approx.mean, approx.variance, sec.r_lo, sec.r_hi, alpha, true);
        return std::array<double, 3>{t.mass, t.moment * std::cos(alpha), t.moment * std::sin(alpha)};
      },
      sec.angle_lo, sec.angle_hi, kSectorTolerance * 1e-3, breaks);
  if (!(res.value[0] > kMinMass)) throw DegenerateError("cell_centroid: cell probability below 1e-12");
  return {res.value[1] / res.value[0], res.value[2] / res.value[0]};
}

}  // namespace qlos
