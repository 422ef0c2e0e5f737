// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlos/channel.hpp"
#include "qlos/constellation.hpp"
#include "qlos/quantizer.hpp"

namespace qlos {

/// Everything a detector needs for one (theta, sigma2, quantizer) operating
/// point. Quantities are stored for Phi = 0; a frame with common phase phi
/// sees H(phi) = e^{-j phi} H(0) and W(phi) = e^{j phi} W(0), so detectors
/// take phi per call and never rebuild the context.
class DetectionContext {
 public:
  /// `q` must carry a codebook for ZF/VQ use; ML only needs its cells.
  DetectionContext(int n, double theta, const Constellation& c, Quantizer q, double sigma2);

  int n() const noexcept { return n_; }
  double theta() const noexcept { return theta_; }
  double sigma2() const noexcept { return sigma2_; }
  const Constellation& constellation() const noexcept { return c_; }
  const Quantizer& quantizer() const noexcept { return q_; }
  std::size_t inputs() const noexcept { return inputs_; }

  /// H(0) and its pseudoinverse (H^H H)^-1 H^H.
  const Eigen::MatrixXcd& h0() const noexcept { return h0_; }
  const Eigen::MatrixXcd& zf0() const noexcept { return zf0_; }
  ChannelMatrix channel(double phi) const { return los_channel(n_, theta_, phi); }

  /// Noiseless output of antenna i for transmit vector x at Phi = 0.
  cplx mean0(std::size_t x, int i) const {
    return means0_[x * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i)];
  }

  /// Transmit vector index of per-stream point indices (stream 0 most significant).
  std::size_t vector_index(std::span<const std::size_t> symbols) const;

  // Per-antenna distinct noiseless outputs at Phi = 0, used by ML.
  std::span<const cplx> distinct_means(int i) const { return distinct_[static_cast<std::size_t>(i)]; }
  std::span<const std::uint32_t> distinct_of(int i) const { return distinct_of_[static_cast<std::size_t>(i)]; }

 private:
  int n_;
  double theta_;
  Constellation c_;
  Quantizer q_;
  double sigma2_;
  std::size_t inputs_;
  Eigen::MatrixXcd h0_;
  Eigen::MatrixXcd zf0_;
  std::vector<cplx> means0_;
  std::vector<std::vector<cplx>> distinct_;
  std::vector<std::vector<std::uint32_t>> distinct_of_;
};

/// Quantized maximum-likelihood detector over all |S|^n transmit vectors.
///
/// Log-likelihoods are sums of per-antenna log bin probabilities floored at
/// 1e-300; ties go to the lowest transmit vector index. When two consecutive
/// calls share a phase the detector builds the full log-probability table
/// for it and reuses it while the phase stays the same, so fixed-phase
/// sweeps pay for the table once. Not thread safe; use one per worker.
class MlDetector {
 public:
  /// Throws ConfigError for more than 4096 candidates unless `allow_large` is set.
  explicit MlDetector(const DetectionContext& ctx, bool allow_large = false);

  /// Writes per-stream point indices of the decision into `out` (size n).
  void detect(std::span<const std::size_t> yq, double phi, std::span<std::size_t> out);

  /// Log-likelihood of transmit vector x given yq.
  double log_likelihood(std::span<const std::size_t> yq, double phi, std::size_t x);

 private:
  void prepare(double phi);
  void fill_frame(std::span<const std::size_t> yq, double phi);

  const DetectionContext& ctx_;
  bool cached_ = false;
  double cached_phi_ = 0.0;
  bool have_last_ = false;
  double last_phi_ = 0.0;
  std::vector<double> table_;  // [antenna][distinct mean][bin]
  std::vector<double> frame_;  // [antenna][distinct mean] for the current frame
  std::vector<std::size_t> frame_offset_;
};

std::vector<std::size_t> ml_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   double phi = 0.0);

/// ZF with centroid reconstruction: y_hat = codebook[yq], x_tilde = W(phi) y_hat,
/// independent per-stream slicing.
void zf_detect(std::span<const std::size_t> yq, const DetectionContext& ctx, double phi,
               std::span<std::size_t> out);
std::vector<std::size_t> zf_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   double phi = 0.0);

/// ZF on an arbitrary reconstruction vector (used for unquantized checks).
void zf_detect_samples(std::span<const cplx> y, const DetectionContext& ctx, double phi,
                       std::span<std::size_t> out);

/// Virtual bins compatible with an observed physical bin vector.
struct CandidateSet {
  std::vector<std::vector<std::uint32_t>> per_antenna;  // virtual cells inside each observed cell

  /// |T| = product of per-antenna list sizes.
  std::size_t size() const;
  /// t-th member in mixed radix order (antenna 0 most significant).
  std::vector<std::uint32_t> member(std::size_t t) const;
};

CandidateSet build_candidate_set(std::span<const std::size_t> yq, const VirtualQuantizer& vq);

struct VqStats {
  std::uint64_t candidates = 0;
  std::uint64_t slice_calls = 0;
};

/// Virtual-quantization GLRT detector. For every candidate t of the
/// candidate set: ZF on the virtual centroids of t, slice, re-quantize the
/// noiseless output H x_hat with the virtual quantizer and score the
/// squared distance between the two centroid vectors. The lowest score
/// wins; ties go to the lowest t. Not thread safe; use one per worker.
class VqDetector {
 public:
  /// `vq.virt` must carry a codebook. Throws ConfigError otherwise or when
  /// the context quantizer differs from vq.physical in size.
  VqDetector(const DetectionContext& ctx, const VirtualQuantizer& vq);

  void detect(std::span<const std::size_t> yq, double phi, std::span<std::size_t> out);

  const VqStats& stats() const noexcept { return stats_; }
  void reset_stats() noexcept { stats_ = {}; }

 private:
  const DetectionContext& ctx_;
  const VirtualQuantizer& vq_;
  VqStats stats_;
  std::vector<std::uint32_t> memo_stamp_;
  std::vector<cplx> memo_centroids_;  // [x][antenna] virtual centroid of the noiseless output
  std::uint32_t stamp_ = 0;
  std::vector<cplx> v_;         // [antenna][child][stream] filtered child centroids
  std::vector<cplx> child_c_;   // [antenna][child] child centroids
  std::vector<std::size_t> child_n_;
};

std::vector<std::size_t> vq_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   const VirtualQuantizer& vq, double phi = 0.0);

/// Per-stream slicing that agrees with Constellation::slice (including its
/// lowest-index tie rule) but runs in constant time for QPSK and 16QAM.
std::size_t fast_slice(cplx z, const Constellation& c);

}  // namespace qlos
