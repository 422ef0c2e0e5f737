// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qlos/stats.hpp"

namespace qlos {

enum class QuantizerFamily { phase_only, amplitude_phase, iq };
enum class DesignMetric { fixed, equal_prob, mmsqe };

std::string_view to_string(QuantizerFamily f);
std::string_view to_string(DesignMetric m);

/// Identical per-antenna quantizer with regular cells.
///
/// Bins are numbered from 0:
///  - I/Q:        bin = i * S + q, i/q the in-phase/quadrature interval indices;
///  - amp/phase:  bin = k * M + m, k the ring index, m the sector index;
///  - phase-only: bin = m.
/// Cells are lower-inclusive and upper-exclusive on every coordinate and
/// sector m covers angles [2 pi m / M, 2 pi (m+1) / M).
class Quantizer {
 public:
  /// I/Q quantizer with the same strictly increasing thresholds on both axes.
  static Quantizer iq(std::vector<double> thresholds);
  /// K = amplitude_thresholds.size() + 1 rings and M equal sectors.
  static Quantizer amplitude_phase(std::vector<double> amplitude_thresholds, int sectors);
  static Quantizer phase_only(int sectors);

  QuantizerFamily family() const noexcept { return family_; }
  DesignMetric metric() const noexcept { return metric_; }
  /// Noise variance the thresholds were designed for (NaN for fixed designs).
  double design_sigma2() const noexcept { return design_sigma2_; }

  int levels() const noexcept { return levels_; }   // S (I/Q) or K (rings)
  int sectors() const noexcept { return sectors_; } // M; 0 for I/Q
  std::size_t bin_count() const noexcept { return bin_count_; }
  std::span<const double> thresholds() const noexcept { return thresholds_; }

  /// Bin of y. Throws InvalidInputError for non-finite y.
  std::size_t index(cplx y) const;
  /// Same as index() without the finiteness check.
  std::size_t index_unchecked(cplx y) const noexcept;

  Cell cell(std::size_t bin) const;

  /// True when y lies within `tol` of a cell boundary (or, for sector
  /// families, within `tol` of the origin where the angle is undefined).
  bool near_boundary(cplx y, double tol) const;

  /// True when a quarter turn maps cells onto cells.
  bool quarter_turn_symmetric() const;

  bool has_codebook() const noexcept { return !codebook_.empty(); }
  std::span<const cplx> codebook() const noexcept { return codebook_; }
  cplx reconstruction(std::size_t bin) const { return codebook_[bin]; }

  /// Attaches centroids of every cell under CN(0, 1 + sigma2).
  void attach_codebook(double sigma2);

  /// Short scheme descriptor, e.g. "iq-eqprob:S=4" or "ap-fixed:K=2,M=8".
  std::string describe() const;

  // Used by the design routines.
  void set_design(DesignMetric metric, double sigma2) {
    metric_ = metric;
    design_sigma2_ = sigma2;
  }

 private:
  Quantizer() = default;

  QuantizerFamily family_ = QuantizerFamily::iq;
  DesignMetric metric_ = DesignMetric::fixed;
  double design_sigma2_ = std::numeric_limits<double>::quiet_NaN();
  int levels_ = 1;
  int sectors_ = 0;
  std::size_t bin_count_ = 1;
  std::vector<double> thresholds_;
  std::vector<cplx> codebook_;
};

/// Equal-probability I/Q thresholds sqrt((1+sigma2)/2) * Phi^-1(i/S).
Quantizer design_equal_prob_iq(int levels, double sigma2);

/// Equal-probability rings A_i = sqrt((1+sigma2) ln(K/(K-i))) with M sectors.
/// K = 1 yields a phase-only quantizer.
Quantizer design_equal_prob_ap(int rings, int sectors, double sigma2);

Quantizer design_phase_only(int sectors);

/// Lloyd-Max trace kept for diagnostics.
struct LloydMaxTrace {
  int iterations = 0;
  double last_change = 0.0;
};

/// Lloyd-Max (minimum mean squared quantization error) design under the
/// CN(0, 1 + sigma2) approximation. I/Q axes use the 1-D normal with
/// variance (1+sigma2)/2; rings use the Rayleigh density of the amplitude
/// with uniform sectors. Stops when the largest threshold move is below
/// 1e-10; throws NumericalError after 10^4 iterations.
Quantizer design_mmsqe_iq(int levels, double sigma2, LloydMaxTrace* trace = nullptr);
Quantizer design_mmsqe_ap(int rings, int sectors, double sigma2, LloydMaxTrace* trace = nullptr);

/// Centroid of every cell under CN(0, 1 + sigma2).
std::vector<cplx> centroid_codebook(const Quantizer& q, double sigma2);

/// Mean squared quantization error with centroid reconstruction under
/// CN(0, 1 + sigma2).
double msqe(const Quantizer& q, double sigma2);

/// Physical I/Q quantizer plus an equal-probability refinement whose cells
/// each lie inside one physical cell.
struct VirtualQuantizer {
  Quantizer physical;
  Quantizer virt;
  std::vector<std::uint32_t> coarsen;                 // virtual bin -> physical bin
  std::vector<std::vector<std::uint32_t>> children;   // physical bin -> virtual bins

  std::size_t coarsen_index(std::size_t virtual_bin) const { return coarsen[virtual_bin]; }
};

/// Refines an equal-probability I/Q quantizer designed at sigma2 by
/// splitting every axis interval `factor` ways (virtual S' = factor * S).
/// Throws UnsupportedFamilyError for non-I/Q input and ConfigError when the
/// physical thresholds are not a subset of the virtual ones.
VirtualQuantizer refine(const Quantizer& physical, int factor = 2);

/// JSON export: family, sizes, thresholds, codebook ([re, im] pairs), sigma2.
std::string quantizer_to_json(const Quantizer& q, int indent = 2);

}  // namespace qlos
