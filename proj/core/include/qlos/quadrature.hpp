// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "qlos/errors.hpp"

namespace qlos {

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodX = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodW = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussW = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// Result of an N-component adaptive integral.
template <std::size_t N>
struct QuadratureResult {
  std::array<double, N> value{};
  double error = 0.0;  // max over components of the summed |K15 - G7| estimates
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) integration of a vector-valued
/// integrand `f(x) -> std::array<double, N>` over [a, b]. `breaks` are extra
/// initial split points (ignored when outside (a, b)). Bisects the interval
/// with the largest error estimate until the summed estimate is below
/// `abs_tol`; throws NumericalError after `max_intervals` intervals.
template <std::size_t N, class F>
QuadratureResult<N> integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                       std::span<const double> breaks = {},
                                       int max_intervals = 4000) {
  struct Piece {
    double lo, hi;
    std::array<double, N> value;
    double err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };

  auto rule = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    std::array<double, N> kron{}, gauss{};
    const auto fc = f(c);
    for (std::size_t k = 0; k < N; ++k) {
      kron[k] = detail::kKronrodW[7] * fc[k];
      gauss[k] = detail::kGaussW[3] * fc[k];
    }
    for (int j = 0; j < 7; ++j) {
      const double dx = h * detail::kKronrodX[static_cast<std::size_t>(j)];
      const auto f1 = f(c - dx);
      const auto f2 = f(c + dx);
      for (std::size_t k = 0; k < N; ++k) {
        kron[k] += detail::kKronrodW[static_cast<std::size_t>(j)] * (f1[k] + f2[k]);
        if (j % 2 == 1) gauss[k] += detail::kGaussW[static_cast<std::size_t>(j / 2)] * (f1[k] + f2[k]);
      }
    }
    Piece p{lo, hi, {}, 0.0};
    for (std::size_t k = 0; k < N; ++k) {
      p.value[k] = kron[k] * h;
      p.err = std::max(p.err, std::abs((kron[k] - gauss[k]) * h));
    }
    return p;
  };

  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::priority_queue<Piece> heap;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) heap.push(rule(pts[i], pts[i + 1]));

  auto total = [&]() {
    // Copy so the heap can keep being refined.
    auto copy = heap;
    QuadratureResult<N> r;
    r.intervals = static_cast<int>(copy.size());
    while (!copy.empty()) {
      const Piece& p = copy.top();
      for (std::size_t k = 0; k < N; ++k) r.value[k] += p.value[k];
      r.error += p.err;
      copy.pop();
    }
    return r;
  };

  double err_sum = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      err_sum += copy.top().err;
      copy.pop();
    }
  }
  while (err_sum > abs_tol) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      throw NumericalError("adaptive quadrature did not reach tolerance", err_sum);
    }
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericalError("adaptive quadrature interval underflow", err_sum);
    }
    Piece left = rule(worst.lo, mid);
    Piece right = rule(mid, worst.hi);
    err_sum += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }
  return total();
}

}  // namespace qlos
