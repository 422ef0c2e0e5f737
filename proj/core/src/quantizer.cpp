// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/quantizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "qlos/errors.hpp"

namespace qlos {

using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_increasing(const std::vector<double>& t, const char* what) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) throw ConfigError(std::string(what) + ": thresholds must be finite");
    if (i > 0 && !(t[i] > t[i - 1]))
      throw ConfigError(std::string(what) + ": thresholds must be strictly increasing");
  }
}

double wrapped_angle(cplx y) {
  double a = std::atan2(y.imag(), y.real());
  if (a < 0.0) a += 2.0 * pi;
  return a;
}

std::size_t sector_of(cplx y, int sectors) {
  const double t = wrapped_angle(y) * sectors / (2.0 * pi);
  auto m = static_cast<long>(std::floor(t));
  // Angles that round onto a boundary belong to the upper sector.
  if (static_cast<double>(m + 1) - t < 1e-12) ++m;
  m %= sectors;
  return static_cast<std::size_t>(m);
}

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view to_string(QuantizerFamily f) {
  switch (f) {
    case QuantizerFamily::phase_only: return "phase";
    case QuantizerFamily::amplitude_phase: return "ap";
    case QuantizerFamily::iq: return "iq";
  }
  return "?";
}

std::string_view to_string(DesignMetric m) {
  switch (m) {
    case DesignMetric::fixed: return "fixed";
    case DesignMetric::equal_prob: return "eqprob";
    case DesignMetric::mmsqe: return "mmsqe";
  }
  return "?";
}

Quantizer Quantizer::iq(std::vector<double> thresholds) {
  check_increasing(thresholds, "iq quantizer");
  Quantizer q;
  q.family_ = QuantizerFamily::iq;
  q.levels_ = static_cast<int>(thresholds.size()) + 1;
  q.sectors_ = 0;
  q.bin_count_ = static_cast<std::size_t>(q.levels_ * q.levels_);
  q.thresholds_ = std::move(thresholds);
  return q;
}

Quantizer Quantizer::amplitude_phase(std::vector<double> amplitude_thresholds, int sectors) {
  check_increasing(amplitude_thresholds, "amplitude/phase quantizer");
  if (!amplitude_thresholds.empty() && !(amplitude_thresholds.front() > 0.0))
    throw ConfigError("amplitude/phase quantizer: amplitude thresholds must be positive");
  if (sectors < 1) throw ConfigError("amplitude/phase quantizer: need at least one sector");
  Quantizer q;
  q.family_ = amplitude_thresholds.empty() ? QuantizerFamily::phase_only
                                           : QuantizerFamily::amplitude_phase;
  q.levels_ = static_cast<int>(amplitude_thresholds.size()) + 1;
  q.sectors_ = sectors;
  q.bin_count_ = static_cast<std::size_t>(q.levels_ * sectors);
  q.thresholds_ = std::move(amplitude_thresholds);
  return q;
}

Quantizer Quantizer::phase_only(int sectors) {
  if (sectors < 2) throw ConfigError("phase-only quantizer: need M >= 2");
  return amplitude_phase({}, sectors);
}

std::size_t Quantizer::index(cplx y) const {
  if (!std::isfinite(y.real()) || !std::isfinite(y.imag()))
    throw InvalidInputError("quantize: non-finite input");
  return index_unchecked(y);
}

std::size_t Quantizer::index_unchecked(cplx y) const noexcept {
  if (family_ == QuantizerFamily::iq) {
    const auto i = static_cast<std::size_t>(
        std::upper_bound(thresholds_.begin(), thresholds_.end(), y.real()) - thresholds_.begin());
    const auto q = static_cast<std::size_t>(
        std::upper_bound(thresholds_.begin(), thresholds_.end(), y.imag()) - thresholds_.begin());
    return i * static_cast<std::size_t>(levels_) + q;
  }
  const std::size_t m = sector_of(y, sectors_);
  if (thresholds_.empty()) return m;
  const auto k = static_cast<std::size_t>(
      std::upper_bound(thresholds_.begin(), thresholds_.end(), std::abs(y)) - thresholds_.begin());
  return k * static_cast<std::size_t>(sectors_) + m;
}

Cell Quantizer::cell(std::size_t bin) const {
  if (bin >= bin_count_) throw InputShapeError("quantizer cell: bin index out of range");
  auto lo = [&](std::size_t i) { return i == 0 ? -kInf : thresholds_[i - 1]; };
  auto hi = [&](std::size_t i) { return i == thresholds_.size() ? kInf : thresholds_[i]; };
  if (family_ == QuantizerFamily::iq) {
    const std::size_t i = bin / static_cast<std::size_t>(levels_);
    const std::size_t q = bin % static_cast<std::size_t>(levels_);
    return RectCell{lo(i), hi(i), lo(q), hi(q)};
  }
  const std::size_t k = bin / static_cast<std::size_t>(sectors_);
  const std::size_t m = bin % static_cast<std::size_t>(sectors_);
  const double width = 2.0 * pi / sectors_;
  return SectorCell{k == 0 ? 0.0 : thresholds_[k - 1], hi(k), width * static_cast<double>(m),
                    width * static_cast<double>(m + 1)};
}

bool Quantizer::near_boundary(cplx y, double tol) const {
  if (family_ == QuantizerFamily::iq) {
    for (double t : thresholds_)
      if (std::abs(y.real() - t) < tol || std::abs(y.imag() - t) < tol) return true;
    return false;
  }
  const double r = std::abs(y);
  if (r < tol) return true;
  for (double t : thresholds_)
    if (std::abs(r - t) < tol) return true;
  const double t = wrapped_angle(y) * sectors_ / (2.0 * pi);
  const double frac = t - std::round(t);
  // Arc-length distance to the nearest sector edge.
  return std::abs(frac) * (2.0 * pi / sectors_) * r < tol;
}

bool Quantizer::quarter_turn_symmetric() const {
  if (family_ != QuantizerFamily::iq) return sectors_ % 4 == 0;
  const std::size_t n = thresholds_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(thresholds_[i] + thresholds_[n - 1 - i]) > 1e-12) return false;
  return true;
}

void Quantizer::attach_codebook(double sigma2) { codebook_ = centroid_codebook(*this, sigma2); }

std::string Quantizer::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ != QuantizerFamily::phase_only) os << '-' << to_string(metric_);
  os << ':';
  if (family_ == QuantizerFamily::iq) {
    os << "S=" << levels_;
    if (metric_ == DesignMetric::fixed) {
      os << ",T=";
      for (std::size_t i = 0; i < thresholds_.size(); ++i)
        os << (i ? "/" : "") << fmt_double(thresholds_[i]);
    }
  } else if (family_ == QuantizerFamily::amplitude_phase) {
    os << "K=" << levels_ << ",M=" << sectors_;
    if (metric_ == DesignMetric::fixed) {
      os << ",A=";
      for (std::size_t i = 0; i < thresholds_.size(); ++i)
        os << (i ? "/" : "") << fmt_double(thresholds_[i]);
    }
  } else {
    os << "M=" << sectors_;
  }
  return os.str();
}

Quantizer design_equal_prob_iq(int levels, double sigma2) {
  if (levels < 2) throw ConfigError("design_equal_prob_iq: need S >= 2");
  if (!(sigma2 > 0.0)) throw ConfigError("design_equal_prob_iq: sigma2 must be positive");
  const double scale = std::sqrt((1.0 + sigma2) / 2.0);
  std::vector<double> t;
  for (int i = 1; i < levels; ++i)
    t.push_back(scale * std_normal_quantile(static_cast<double>(i) / static_cast<double>(levels)));
  Quantizer q = Quantizer::iq(std::move(t));
  q.set_design(DesignMetric::equal_prob, sigma2);
  return q;
}

Quantizer design_equal_prob_ap(int rings, int sectors, double sigma2) {
  if (rings < 1) throw ConfigError("design_equal_prob_ap: need K >= 1");
  if (sectors < 2) throw ConfigError("design_equal_prob_ap: need M >= 2");
  if (!(sigma2 >= 0.0)) throw ConfigError("design_equal_prob_ap: sigma2 must be non-negative");
  std::vector<double> a;
  for (int i = 1; i < rings; ++i)
    a.push_back(std::sqrt((1.0 + sigma2) * std::log(static_cast<double>(rings) / (rings - i))));
  Quantizer q = Quantizer::amplitude_phase(std::move(a), sectors);
  q.set_design(DesignMetric::equal_prob, sigma2);
  return q;
}

Quantizer design_phase_only(int sectors) { return Quantizer::phase_only(sectors); }

namespace {

// 1-D Lloyd-Max: alternate centroid and midpoint conditions.
std::vector<double> lloyd_max_1d(std::vector<double> thresholds, double lower, double upper,
                                 const std::function<double(double, double)>& cond_mean,
                                 LloydMaxTrace* trace) {
  constexpr int kMaxIter = 10000;
  constexpr double kTol = 1e-10;
  const std::size_t n = thresholds.size();
  std::vector<double> levels(n + 1);
  double change = kInf;
  int it = 0;
  for (; it < kMaxIter && change >= kTol; ++it) {
    for (std::size_t k = 0; k <= n; ++k) {
      const double a = k == 0 ? lower : thresholds[k - 1];
      const double b = k == n ? upper : thresholds[k];
      levels[k] = cond_mean(a, b);
    }
    change = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 0.5 * (levels[k] + levels[k + 1]);
      change = std::max(change, std::abs(t - thresholds[k]));
      thresholds[k] = t;
    }
  }
  if (trace) *trace = LloydMaxTrace{it, change};
  if (change >= kTol)
    throw NumericalError("Lloyd-Max did not converge within 10^4 iterations (last change " +
                             std::to_string(change) + ")",
                         change);
  return thresholds;
}

}  // namespace

Quantizer design_mmsqe_iq(int levels, double sigma2, LloydMaxTrace* trace) {
  const Quantizer init = design_equal_prob_iq(levels, sigma2);
  const double sd = std::sqrt((1.0 + sigma2) / 2.0);
  auto cond_mean = [sd](double a, double b) { return sd * truncated_normal_mean(a / sd, b / sd); };
  std::vector<double> t(init.thresholds().begin(), init.thresholds().end());
  t = lloyd_max_1d(std::move(t), -kInf, kInf, cond_mean, trace);
  // Restore exact antisymmetry lost to round-off.
  for (std::size_t i = 0; i < t.size() / 2; ++i) {
    const double v = 0.5 * (t[t.size() - 1 - i] - t[i]);
    t[i] = -v;
    t[t.size() - 1 - i] = v;
  }
  if (t.size() % 2 == 1) t[t.size() / 2] = 0.0;
  Quantizer q = Quantizer::iq(std::move(t));
  q.set_design(DesignMetric::mmsqe, sigma2);
  return q;
}

Quantizer design_mmsqe_ap(int rings, int sectors, double sigma2, LloydMaxTrace* trace) {
  const Quantizer init = design_equal_prob_ap(rings, sectors, sigma2);
  if (rings == 1) return init;
  const double v = 1.0 + sigma2;
  const double s = std::sqrt(v);
  // E[R | a <= R < b] for the Rayleigh amplitude of CN(0, v).
  auto cond_mean = [v, s](double a, double b) {
    const double ea = std::exp(-a * a / v);
    const double eb = std::isfinite(b) ? std::exp(-b * b / v) : 0.0;
    const double bterm = std::isfinite(b) ? b * eb : 0.0;
    const double erf_b = std::isfinite(b) ? std::erf(b / s) : 1.0;
    const double num = a * ea - bterm + 0.5 * std::sqrt(pi) * s * (erf_b - std::erf(a / s));
    const double den = ea - eb;
    if (!(den > 0.0)) throw DegenerateError("Rayleigh ring has zero probability");
    return num / den;
  };
  std::vector<double> t(init.thresholds().begin(), init.thresholds().end());
  t = lloyd_max_1d(std::move(t), 0.0, kInf, cond_mean, trace);
  Quantizer q = Quantizer::amplitude_phase(std::move(t), sectors);
  q.set_design(DesignMetric::mmsqe, sigma2);
  return q;
}

std::vector<cplx> centroid_codebook(const Quantizer& q, double sigma2) {
  const GaussianApprox approx = GaussianApprox::for_noise(sigma2);
  std::vector<cplx> out(q.bin_count());
  for (std::size_t j = 0; j < q.bin_count(); ++j) out[j] = cell_centroid(approx, q.cell(j));
  return out;
}

double msqe(const Quantizer& q, double sigma2) {
  const GaussianApprox approx = GaussianApprox::for_noise(sigma2);
  double captured = 0.0;
  for (std::size_t j = 0; j < q.bin_count(); ++j) {
    const Cell c = q.cell(j);
    const double p = cell_prob(approx.mean, approx.variance, c);
    if (p < 1e-15) continue;
    captured += p * std::norm(cell_centroid(approx, c));
  }
  return approx.variance + std::norm(approx.mean) - captured;
}

VirtualQuantizer refine(const Quantizer& physical, int factor) {
  if (physical.family() != QuantizerFamily::iq)
    throw UnsupportedFamilyError("refine: virtual quantization needs an I/Q physical quantizer");
  if (factor < 2) throw ConfigError("refine: factor must be at least 2");
  if (physical.metric() != DesignMetric::equal_prob)
    throw ConfigError("refine: physical quantizer must be an equal-probability design");
  const double sigma2 = physical.design_sigma2();
  Quantizer virt = design_equal_prob_iq(physical.levels() * factor, sigma2);

  // Physical thresholds must reappear bit-identically in the refinement.
  for (double t : physical.thresholds()) {
    if (std::find(virt.thresholds().begin(), virt.thresholds().end(), t) == virt.thresholds().end())
      throw ConfigError("refine: physical thresholds are not a subset of the virtual thresholds");
  }

  VirtualQuantizer vq{physical, std::move(virt), {}, {}};
  vq.coarsen.resize(vq.virt.bin_count());
  vq.children.assign(physical.bin_count(), {});
  auto interior = [](double lo, double hi) {
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi - 1.0;
    if (std::isinf(hi)) return lo + 1.0;
    return 0.5 * (lo + hi);
  };
  for (std::size_t v = 0; v < vq.virt.bin_count(); ++v) {
    const auto rect = std::get<RectCell>(vq.virt.cell(v));
    const cplx probe{interior(rect.re_lo, rect.re_hi), interior(rect.im_lo, rect.im_hi)};
    const auto p = static_cast<std::uint32_t>(physical.index(probe));
    vq.coarsen[v] = p;
    vq.children[p].push_back(static_cast<std::uint32_t>(v));
  }
  return vq;
}

}  // namespace qlos
