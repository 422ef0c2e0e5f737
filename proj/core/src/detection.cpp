// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "qlos/errors.hpp"
#include "qlos/infotheory.hpp"

namespace qlos {

namespace {

constexpr double kLogFloor = 1e-300;
// Relative slack under which two log-likelihoods count as tied.
constexpr double kTieSlack = 1e-12;

std::pair<long long, long long> round_key(cplx m) {
  return {std::llround(m.real() * 1e12), std::llround(m.imag() * 1e12)};
}

// Nearest level index of a square-QAM axis with `levels` points at
// (2l - levels + 1) / scale_inv; returns -1 when u sits on a decision boundary.
int axis_level(double u, int levels) {
  // Boundaries sit at even integers between -(levels-2) and levels-2.
  const double shifted = (u + levels) / 2.0;
  const double fl = std::floor(shifted);
  if (std::abs(shifted - std::round(shifted)) < 1e-12) {
    const double r = std::round(shifted);
    if (r >= 1.0 && r <= levels - 1.0) return -1;
  }
  return std::clamp(static_cast<int>(fl), 0, levels - 1);
}

}  // namespace

std::size_t fast_slice(cplx z, const Constellation& c) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return c.slice(z);
  if (c.kind() == Modulation::qpsk) {
    const double re = z.real(), im = z.imag();
    if (re == 0.0 || im == 0.0) return c.slice(z);
    if (im > 0.0) return re > 0.0 ? 0 : 1;
    return re < 0.0 ? 2 : 3;
  }
  static const double kScale = std::sqrt(10.0);
  const int li = axis_level(z.real() * kScale, 4);
  const int lq = axis_level(z.imag() * kScale, 4);
  if (li < 0 || lq < 0) return c.slice(z);
  return static_cast<std::size_t>(4 * li + lq);
}

DetectionContext::DetectionContext(int n, double theta, const Constellation& c, Quantizer q,
                                   double sigma2)
    : n_(n), theta_(theta), c_(c), q_(std::move(q)), sigma2_(sigma2), inputs_(input_count(c, n)) {
  if (!(sigma2 > 0.0)) throw ConfigError("detection: noise variance must be positive");
  const ChannelMatrix h = los_channel(n, theta, 0.0);
  h0_ = h.h;
  const Eigen::MatrixXcd gram = h0_.adjoint() * h0_;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
  if (!lu.isInvertible()) throw DegenerateError("detection: channel is singular at this theta");
  zf0_ = lu.inverse() * h0_.adjoint();
  means0_ = noiseless_outputs(h, c_);

  const auto nn = static_cast<std::size_t>(n);
  distinct_.assign(nn, {});
  distinct_of_.assign(nn, std::vector<std::uint32_t>(inputs_));
  for (std::size_t i = 0; i < nn; ++i) {
    std::map<std::pair<long long, long long>, std::uint32_t> seen;
    for (std::size_t x = 0; x < inputs_; ++x) {
      const cplx m = means0_[x * nn + i];
      auto [it, fresh] = seen.emplace(round_key(m), static_cast<std::uint32_t>(distinct_[i].size()));
      if (fresh) distinct_[i].push_back(m);
      distinct_of_[i][x] = it->second;
    }
  }
}

std::size_t DetectionContext::vector_index(std::span<const std::size_t> symbols) const {
  std::size_t x = 0;
  for (std::size_t s : symbols) x = x * c_.size() + s;
  return x;
}

// ---------------------------------------------------------------- ML

MlDetector::MlDetector(const DetectionContext& ctx, bool allow_large) : ctx_(ctx) {
  if (ctx.inputs() > 4096 && !allow_large)
    throw ConfigError("ML detection over more than 4096 candidates needs allow_large_ml");
  frame_offset_.resize(static_cast<std::size_t>(ctx.n()) + 1, 0);
  for (int i = 0; i < ctx.n(); ++i)
    frame_offset_[static_cast<std::size_t>(i) + 1] =
        frame_offset_[static_cast<std::size_t>(i)] + ctx.distinct_means(i).size();
  frame_.resize(frame_offset_.back());
}

void MlDetector::prepare(double phi) {
  const std::size_t bins = ctx_.quantizer().bin_count();
  const cplx rot = std::polar(1.0, -phi);
  table_.resize(frame_offset_.back() * bins);
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < bins; ++j) cells.push_back(ctx_.quantizer().cell(j));
  for (int i = 0; i < ctx_.n(); ++i) {
    const auto dm = ctx_.distinct_means(i);
    for (std::size_t d = 0; d < dm.size(); ++d) {
      double* row = table_.data() + (frame_offset_[static_cast<std::size_t>(i)] + d) * bins;
      for (std::size_t j = 0; j < bins; ++j)
        row[j] = std::log(std::max(cell_prob(rot * dm[d], ctx_.sigma2(), cells[j]), kLogFloor));
    }
  }
  cached_ = true;
  cached_phi_ = phi;
}

void MlDetector::fill_frame(std::span<const std::size_t> yq, double phi) {
  if (yq.size() != static_cast<std::size_t>(ctx_.n()))
    throw InputShapeError("ml_detect: observation length differs from array size");
  // A phase seen twice in a row is treated as fixed and gets the full table.
  if (!(cached_ && cached_phi_ == phi) && have_last_ && last_phi_ == phi) prepare(phi);
  have_last_ = true;
  last_phi_ = phi;
  const std::size_t bins = ctx_.quantizer().bin_count();
  if (cached_ && cached_phi_ == phi) {
    for (int i = 0; i < ctx_.n(); ++i) {
      const std::size_t off = frame_offset_[static_cast<std::size_t>(i)];
      const std::size_t cnt = frame_offset_[static_cast<std::size_t>(i) + 1] - off;
      for (std::size_t d = 0; d < cnt; ++d) frame_[off + d] = table_[(off + d) * bins + yq[static_cast<std::size_t>(i)]];
    }
    return;
  }
  const cplx rot = std::polar(1.0, -phi);
  for (int i = 0; i < ctx_.n(); ++i) {
    const Cell cell = ctx_.quantizer().cell(yq[static_cast<std::size_t>(i)]);
    const auto dm = ctx_.distinct_means(i);
    const std::size_t off = frame_offset_[static_cast<std::size_t>(i)];
    for (std::size_t d = 0; d < dm.size(); ++d)
      frame_[off + d] = std::log(std::max(cell_prob(rot * dm[d], ctx_.sigma2(), cell), kLogFloor));
  }
}

double MlDetector::log_likelihood(std::span<const std::size_t> yq, double phi, std::size_t x) {
  fill_frame(yq, phi);
  double ll = 0.0;
  for (int i = 0; i < ctx_.n(); ++i)
    ll += frame_[frame_offset_[static_cast<std::size_t>(i)] + ctx_.distinct_of(i)[x]];
  return ll;
}

void MlDetector::detect(std::span<const std::size_t> yq, double phi, std::span<std::size_t> out) {
  fill_frame(yq, phi);
  const int n = ctx_.n();
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_x = 0;
  for (std::size_t x = 0; x < ctx_.inputs(); ++x) {
    double ll = 0.0;
    for (int i = 0; i < n; ++i)
      ll += frame_[frame_offset_[static_cast<std::size_t>(i)] + ctx_.distinct_of(i)[x]];
    if (x == 0 || ll > best + kTieSlack * std::max(1.0, std::abs(best))) {
      best = ll;
      best_x = x;
    }
  }
  input_symbols(best_x, ctx_.constellation().size(), n, out);
}

std::vector<std::size_t> ml_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   double phi) {
  MlDetector det(ctx, true);
  std::vector<std::size_t> out(static_cast<std::size_t>(ctx.n()));
  det.detect(yq, phi, out);
  return out;
}

// ---------------------------------------------------------------- ZF

void zf_detect_samples(std::span<const cplx> y, const DetectionContext& ctx, double phi,
                       std::span<std::size_t> out) {
  const int n = ctx.n();
  if (y.size() != static_cast<std::size_t>(n) || out.size() != static_cast<std::size_t>(n))
    throw InputShapeError("zf_detect: vector length differs from array size");
  const cplx derot = std::polar(1.0, phi);
  const auto& w = ctx.zf0();
  for (int k = 0; k < n; ++k) {
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w(k, i) * y[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(k)] = fast_slice(derot * acc, ctx.constellation());
  }
}

void zf_detect(std::span<const std::size_t> yq, const DetectionContext& ctx, double phi,
               std::span<std::size_t> out) {
  const Quantizer& q = ctx.quantizer();
  if (!q.has_codebook()) throw ConfigError("zf_detect: quantizer has no centroid codebook");
  if (yq.size() != static_cast<std::size_t>(ctx.n()))
    throw InputShapeError("zf_detect: observation length differs from array size");
  if (yq.size() > 4) throw InputShapeError("zf_detect: at most 4 antennas supported");
  cplx y[4];
  for (std::size_t i = 0; i < yq.size(); ++i) y[i] = q.reconstruction(yq[i]);
  zf_detect_samples(std::span<const cplx>(y, yq.size()), ctx, phi, out);
}

std::vector<std::size_t> zf_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   double phi) {
  std::vector<std::size_t> out(static_cast<std::size_t>(ctx.n()));
  zf_detect(yq, ctx, phi, out);
  return out;
}

// ---------------------------------------------------------------- VQ

std::size_t CandidateSet::size() const {
  std::size_t s = 1;
  for (const auto& a : per_antenna) s *= a.size();
  return s;
}

std::vector<std::uint32_t> CandidateSet::member(std::size_t t) const {
  std::vector<std::uint32_t> out(per_antenna.size());
  for (std::size_t k = per_antenna.size(); k-- > 0;) {
    out[k] = per_antenna[k][t % per_antenna[k].size()];
    t /= per_antenna[k].size();
  }
  return out;
}

CandidateSet build_candidate_set(std::span<const std::size_t> yq, const VirtualQuantizer& vq) {
  CandidateSet set;
  set.per_antenna.reserve(yq.size());
  for (std::size_t b : yq) {
    if (b >= vq.children.size()) throw InputShapeError("candidate set: physical bin out of range");
    set.per_antenna.push_back(vq.children[b]);
  }
  return set;
}

VqDetector::VqDetector(const DetectionContext& ctx, const VirtualQuantizer& vq) : ctx_(ctx), vq_(vq) {
  if (!vq.virt.has_codebook()) throw ConfigError("vq_detect: virtual quantizer has no codebook");
  if (vq.physical.bin_count() != ctx.quantizer().bin_count())
    throw ConfigError("vq_detect: physical quantizer does not match the detection context");
  if (ctx.n() > 4) throw ConfigError("vq_detect: at most 4 antennas supported");
  memo_stamp_.assign(ctx.inputs(), 0);
  memo_centroids_.resize(ctx.inputs() * static_cast<std::size_t>(ctx.n()));
}

void VqDetector::detect(std::span<const std::size_t> yq, double phi, std::span<std::size_t> out) {
  const int n = ctx_.n();
  const auto nn = static_cast<std::size_t>(n);
  if (yq.size() != nn || out.size() != nn)
    throw InputShapeError("vq_detect: observation length differs from array size");
  if (nn > 4) throw InputShapeError("vq_detect: at most 4 antennas supported");
  const Constellation& c = ctx_.constellation();
  const Quantizer& virt = vq_.virt;
  const cplx rot = std::polar(1.0, -phi);
  const cplx derot = std::conj(rot);
  const auto& w = ctx_.zf0();

  // v[i][a] = W(phi)[:, i] * centroid of the a-th child of antenna i's cell.
  std::size_t max_children = 0;
  for (std::size_t i = 0; i < nn; ++i) max_children = std::max(max_children, vq_.children[yq[i]].size());
  child_n_.assign(nn, 0);
  child_c_.assign(nn * max_children, cplx{});
  v_.assign(nn * max_children * nn, cplx{});
  for (std::size_t i = 0; i < nn; ++i) {
    const auto& kids = vq_.children[yq[i]];
    child_n_[i] = kids.size();
    for (std::size_t a = 0; a < kids.size(); ++a) {
      const cplx cc = virt.reconstruction(kids[a]);
      child_c_[i * max_children + a] = cc;
      const cplx scaled = derot * cc;
      for (std::size_t k = 0; k < nn; ++k)
        v_[(i * max_children + a) * nn + k] = w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) * scaled;
    }
  }

  if (++stamp_ == 0) {
    std::fill(memo_stamp_.begin(), memo_stamp_.end(), 0u);
    stamp_ = 1;
  }

  cplx partial[5][4] = {};
  std::size_t choice[4] = {};
  std::size_t sym[4] = {};
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_x = 0;
  std::uint64_t evaluated = 0;

  // Depth-first over antennas in mixed-radix order, so leaves are visited in
  // increasing t and strict improvement keeps the lowest t on ties.
  auto leaf = [&]() {
    ++evaluated;
    std::size_t x = 0;
    for (std::size_t k = 0; k < nn; ++k) {
      sym[k] = fast_slice(partial[nn][k], c);
      x = x * c.size() + sym[k];
    }
    cplx* cent = memo_centroids_.data() + x * nn;
    if (memo_stamp_[x] != stamp_) {
      memo_stamp_[x] = stamp_;
      for (std::size_t i = 0; i < nn; ++i)
        cent[i] = virt.reconstruction(virt.index_unchecked(rot * ctx_.mean0(x, static_cast<int>(i))));
    }
    double score = 0.0;
    for (std::size_t i = 0; i < nn; ++i) score += std::norm(child_c_[i * max_children + choice[i]] - cent[i]);
    if (score < best) {
      best = score;
      best_x = x;
    }
  };
  auto descend = [&](auto&& self, std::size_t level) -> void {
    if (level >= nn || level >= 4) {
      leaf();
      return;
    }
    for (std::size_t a = 0; a < child_n_[level]; ++a) {
      choice[level] = a;
      const cplx* va = v_.data() + (level * max_children + a) * nn;
      for (std::size_t k = 0; k < nn; ++k) partial[level + 1][k] = partial[level][k] + va[k];
      self(self, level + 1);
    }
  };
  descend(descend, 0);

  stats_.candidates += evaluated;
  stats_.slice_calls += evaluated * nn;
  input_symbols(best_x, c.size(), n, out);
}

std::vector<std::size_t> vq_detect(std::span<const std::size_t> yq, const DetectionContext& ctx,
                                   const VirtualQuantizer& vq, double phi) {
  VqDetector det(ctx, vq);
  std::vector<std::size_t> out(static_cast<std::size_t>(ctx.n()));
  det.detect(yq, phi, out);
  return out;
}

}  // namespace qlos
