// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlos/channel.hpp"
#include "qlos/constellation.hpp"
#include "qlos/phi_policy.hpp"
#include "qlos/quantizer.hpp"

namespace qlos {

/// Number of transmit vectors |S|^n.
std::size_t input_count(const Constellation& c, int n);

/// Per-stream point indices of transmit vector `x` (stream 0 is the most
/// significant digit in base |S|).
void input_symbols(std::size_t x, std::size_t alphabet, int n, std::span<std::size_t> out);

/// Noiseless received vectors H x for every transmit vector, row-major [x][antenna].
std::vector<cplx> noiseless_outputs(const ChannelMatrix& h, const Constellation& c);

/// P(antenna i lands in bin j | transmit vector x), stored as [i][x][j].
class TransitionTable {
 public:
  TransitionTable(int antennas, std::size_t inputs, std::size_t bins)
      : antennas_(antennas), inputs_(inputs), bins_(bins),
        p_(static_cast<std::size_t>(antennas) * inputs * bins, 0.0) {}

  int antennas() const noexcept { return antennas_; }
  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t bins() const noexcept { return bins_; }

  double operator()(int i, std::size_t x, std::size_t j) const { return p_[offset(i, x) + j]; }
  std::span<const double> row(int i, std::size_t x) const { return {p_.data() + offset(i, x), bins_}; }
  std::span<double> row(int i, std::size_t x) { return {p_.data() + offset(i, x), bins_}; }

 private:
  std::size_t offset(int i, std::size_t x) const {
    return (static_cast<std::size_t>(i) * inputs_ + x) * bins_;
  }

  int antennas_;
  std::size_t inputs_;
  std::size_t bins_;
  std::vector<double> p_;
};

/// Bin probabilities for every antenna and transmit vector under noise sigma2.
/// I/Q cells are exact; sector cells use the adaptive angular quadrature.
TransitionTable transition_table(const Quantizer& q, const ChannelMatrix& h,
                                 const Constellation& c, double sigma2);

struct MiOptions {
  PhiPolicy phi = PhiPolicy::grid(256);
  bool allow_monte_carlo = false;
  std::size_t mc_samples = 20000;  // quantized fallback estimator
  std::uint64_t seed = 1;
  int threads = 0;
};

struct MiResult {
  double mi_bits = 0.0;
  double stderr_bits = 0.0;  // 0 for exact enumeration
  bool exact = true;
  double theta = 0.0;
  double snr_db = 0.0;
  std::string phi_policy;
  std::string scheme;
};

/// Largest |S|^n * T^n handled by exact enumeration.
inline constexpr double kMaxEnumeration = 67108864.0;  // 2^26

/// I(X; Y_Q | Phi, theta) in bits, averaged over the phase policy. Exact
/// enumeration when |S|^n T^n <= 2^26; otherwise a Monte Carlo estimate when
/// allowed, else CapacityEstimationError. `uniform` phase policies are only
/// supported by the Monte Carlo estimator.
MiResult mi_quantized(const Quantizer& q, int n, double theta, double sigma2,
                      const Constellation& c, const MiOptions& opt = {});

/// Exact I(X; Y_Q | Phi = phi, theta) for a single phase.
double mi_quantized_at(const Quantizer& q, int n, double theta, double phi, double sigma2,
                       const Constellation& c);

/// Monte Carlo I(X; Y | Phi, theta) of the unquantized Gaussian-mixture channel.
/// Requires samples >= 10^5.
MiResult mi_unquantized(int n, double theta, double sigma2, const Constellation& c,
                        const PhiPolicy& phi, std::size_t samples, std::uint64_t seed = 1);

/// Unquantized minus quantized MI, clipped below at minus the combined
/// standard error.
struct MiGap {
  double gap_bits = 0.0;
  double stderr_bits = 0.0;
};
MiGap mi_gap(const MiResult& unquantized, const MiResult& quantized);

/// Noiseless ambiguity classes: transmit vectors whose noiseless bin tuples
/// coincide.
struct Confusability {
  std::vector<std::vector<std::size_t>> classes;  // sorted, classes ordered by first member
  double asymptotic_mi_bits = 0.0;                // H(X) - sum |C|/|X| log2 |C|
  std::size_t degenerate_outputs = 0;             // noiseless outputs on a cell boundary
  bool boundary_degenerate() const noexcept { return degenerate_outputs > 0; }
};

Confusability noiseless_confusability(const Quantizer& q, int n, double theta, double phi,
                                      const Constellation& c);

}  // namespace qlos
