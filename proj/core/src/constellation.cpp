// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/constellation.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qlos/errors.hpp"

namespace qlos {

Modulation parse_modulation(std::string_view name) {
  if (name == "qpsk") return Modulation::qpsk;
  if (name == "16qam" || name == "qam16") return Modulation::qam16;
  throw ConfigError("unknown modulation '" + std::string(name) + "' (expected qpsk|16qam)");
}

std::string_view to_string(Modulation m) {
  return m == Modulation::qpsk ? "qpsk" : "16qam";
}

namespace {

// Two-bit Gray code for the amplitude levels -3, -1, +1, +3.
constexpr std::uint32_t kGray2[4] = {0b00, 0b01, 0b11, 0b10};

}  // namespace

Constellation::Constellation(Modulation kind) : kind_(kind) {
  using std::numbers::pi;
  if (kind == Modulation::qpsk) {
    bits_per_symbol_ = 2;
    // Label bits (b0 b1): b0 set for negative I, b1 set for negative Q.
    const std::uint32_t labels[4] = {0b00, 0b10, 0b11, 0b01};
    for (int k = 0; k < 4; ++k) {
      points_.push_back(std::polar(1.0, pi * (2 * k + 1) / 4.0));
      label_.push_back(labels[k]);
    }
  } else {
    bits_per_symbol_ = 4;
    const double scale = 1.0 / std::sqrt(10.0);
    // Index k = 4 * i_level + q_level, levels ordered -3, -1, 1, 3.
    for (int i = 0; i < 4; ++i) {
      for (int q = 0; q < 4; ++q) {
        points_.emplace_back((2 * i - 3) * scale, (2 * q - 3) * scale);
        label_.push_back((kGray2[i] << 2) | kGray2[q]);
      }
    }
  }
  point_of_label_.resize(points_.size());
  for (std::size_t k = 0; k < points_.size(); ++k) point_of_label_[label_[k]] = k;
}

std::size_t Constellation::slice(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidInputError("slice: non-finite input");
  std::size_t best = 0;
  double best_d = std::norm(z - points_[0]);
  for (std::size_t k = 1; k < points_.size(); ++k) {
    const double d = std::norm(z - points_[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

int Constellation::bit_distance(std::size_t a, std::size_t b) const {
  return std::popcount(label_[a] ^ label_[b]);
}

Constellation make_constellation(Modulation kind) { return Constellation(kind); }

std::vector<std::size_t> bits_to_indices(std::span<const std::uint8_t> bits,
                                         const Constellation& c, std::size_t n_streams) {
  const auto bps = static_cast<std::size_t>(c.bits_per_symbol());
  if (bits.size() != n_streams * bps)
    throw InputShapeError("map_bits: expected " + std::to_string(n_streams * bps) +
                          " bits, got " + std::to_string(bits.size()));
  std::vector<std::size_t> out(n_streams);
  for (std::size_t s = 0; s < n_streams; ++s) {
    std::uint32_t label = 0;
    for (std::size_t b = 0; b < bps; ++b) label = (label << 1) | (bits[s * bps + b] & 1u);
    out[s] = c.point_of_label(label);
  }
  return out;
}

std::vector<cplx> map_bits(std::span<const std::uint8_t> bits, const Constellation& c,
                           std::size_t n_streams) {
  const auto idx = bits_to_indices(bits, c, n_streams);
  std::vector<cplx> out(n_streams);
  for (std::size_t s = 0; s < n_streams; ++s) out[s] = c.point(idx[s]);
  return out;
}

std::vector<std::uint8_t> demap_bits(std::span<const cplx> symbols, const Constellation& c) {
  const int bps = c.bits_per_symbol();
  std::vector<std::uint8_t> bits;
  bits.reserve(symbols.size() * static_cast<std::size_t>(bps));
  for (const cplx& z : symbols) {
    const std::uint32_t label = c.label(c.slice(z));
    for (int b = bps - 1; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
  }
  return bits;
}

}  // namespace qlos
