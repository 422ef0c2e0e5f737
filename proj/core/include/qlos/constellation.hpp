// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qlos {

using cplx = std::complex<double>;

enum class Modulation { qpsk, qam16 };

/// Parses "qpsk" / "16qam" (also "qam16").
Modulation parse_modulation(std::string_view name);
std::string_view to_string(Modulation m);

/// Per-stream symbol alphabet with unit average energy and a Gray labeling.
///
/// `label(k)` is the bit label of point k packed MSB first into an integer
/// of `bits_per_symbol()` bits; `point_of_label(b)` is its inverse.
class Constellation {
 public:
  explicit Constellation(Modulation kind);

  Modulation kind() const noexcept { return kind_; }
  std::span<const cplx> points() const noexcept { return points_; }
  cplx point(std::size_t k) const { return points_[k]; }
  std::size_t size() const noexcept { return points_.size(); }
  int bits_per_symbol() const noexcept { return bits_per_symbol_; }

  std::uint32_t label(std::size_t k) const { return label_[k]; }
  std::size_t point_of_label(std::uint32_t bits) const { return point_of_label_[bits]; }

  /// Index of the nearest point; ties go to the lowest index.
  /// Throws InvalidInputError for non-finite input.
  std::size_t slice(cplx z) const;

  /// Number of differing bits between the labels of points a and b.
  int bit_distance(std::size_t a, std::size_t b) const;

 private:
  Modulation kind_;
  int bits_per_symbol_;
  std::vector<cplx> points_;
  std::vector<std::uint32_t> label_;
  std::vector<std::size_t> point_of_label_;
};

Constellation make_constellation(Modulation kind);

/// Maps `bits` (one bit per byte, values 0/1) onto n_streams symbols.
/// Throws InputShapeError unless bits.size() == n_streams * bits_per_symbol.
std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c,
                           std::size_t n_streams);

/// Point indices for a bit sequence (same contract as map_bits).
std::vector<std::size_t> bits_to_indices(std::span<const std::uint8_t> bits,
                                         const Constellation& c, std::size_t n_streams);

/// Inverse of map_bits: slices every symbol and emits its label bits.
std::vector<std::uint8_t> demap_bits(std::span<const cplx> symbols, const Constellation& c);

/// Convenience wrapper for Constellation::slice.
inline std::size_t slice(cplx z, const Constellation& c) { return c.slice(z); }

}  // namespace qlos
