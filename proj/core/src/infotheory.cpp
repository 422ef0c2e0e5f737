// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include "qlos/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <unordered_map>

#include "qlos/errors.hpp"
#include "qlos/parallel.hpp"
#include "qlos/rng.hpp"

namespace qlos {

using std::numbers::pi;

std::size_t input_count(const Constellation& c, int n) {
  std::size_t count = 1;
  for (int i = 0; i < n; ++i) count *= c.size();
  return count;
}

void input_symbols(std::size_t x, std::size_t alphabet, int n, std::span<std::size_t> out) {
  for (int k = n - 1; k >= 0; --k) {
    out[static_cast<std::size_t>(k)] = x % alphabet;
    x /= alphabet;
  }
}

std::vector<cplx> noiseless_outputs(const ChannelMatrix& h, const Constellation& c) {
  const int n = h.n;
  const std::size_t inputs = input_count(c, n);
  std::vector<cplx> out(inputs * static_cast<std::size_t>(n));
  std::vector<std::size_t> sym(static_cast<std::size_t>(n));
  for (std::size_t x = 0; x < inputs; ++x) {
    input_symbols(x, c.size(), n, sym);
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) acc += h.h(i, k) * c.point(sym[static_cast<std::size_t>(k)]);
      out[x * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = acc;
    }
  }
  return out;
}

namespace {

struct MeanKey {
  long long re, im;
  bool operator==(const MeanKey&) const = default;
};
struct MeanKeyHash {
  std::size_t operator()(const MeanKey& k) const noexcept {
    return static_cast<std::size_t>(mix64(static_cast<std::uint64_t>(k.re) * 31u +
                                          static_cast<std::uint64_t>(k.im)));
  }
};

MeanKey key_of(cplx m) {
  return {std::llround(m.real() * 1e12), std::llround(m.imag() * 1e12)};
}

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double plogp_sum(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// H(Y_Q) for the product mixture p(y) = mean_x prod_i P[i][x][y_i]. Walks the
// antennas depth first, keeping only transmit vectors whose partial product
// is still non-negligible.
class OutputEntropy {
 public:
  explicit OutputEntropy(const TransitionTable& t)
      : t_(t), n_(t.antennas()), bins_(t.bins()), inputs_(t.inputs()),
        partial_(static_cast<std::size_t>(n_)), active_(static_cast<std::size_t>(n_)),
        acc_(bins_) {}

  double run() {
    entropy_ = 0.0;
    partial_[0].assign(inputs_, 1.0);
    active_[0].resize(inputs_);
    for (std::size_t x = 0; x < inputs_; ++x) active_[0][x] = static_cast<std::uint32_t>(x);
    descend(0);
    return entropy_;
  }

 private:
  static constexpr double kPrune = 1e-18;

  void descend(int level) {
    const auto& act = active_[static_cast<std::size_t>(level)];
    const auto& part = partial_[static_cast<std::size_t>(level)];
    const double inv_inputs = 1.0 / static_cast<double>(inputs_);
    if (level == n_ - 1) {
      std::fill(acc_.begin(), acc_.end(), 0.0);
      for (std::uint32_t x : act) {
        const double w = part[x];
        const auto row = t_.row(level, x);
        for (std::size_t j = 0; j < bins_; ++j) acc_[j] += w * row[j];
      }
      for (std::size_t j = 0; j < bins_; ++j) acc_[j] *= inv_inputs;
      entropy_ += plogp_sum(acc_);
      return;
    }
    auto& next_part = partial_[static_cast<std::size_t>(level + 1)];
    auto& next_act = active_[static_cast<std::size_t>(level + 1)];
    if (next_part.size() != inputs_) next_part.assign(inputs_, 0.0);
    for (std::size_t j = 0; j < bins_; ++j) {
      next_act.clear();
      for (std::uint32_t x : act) {
        const double v = part[x] * t_(level, x, j);
        if (v > kPrune) {
          next_part[x] = v;
          next_act.push_back(x);
        }
      }
      if (!next_act.empty()) descend(level + 1);
    }
  }

  const TransitionTable& t_;
  int n_;
  std::size_t bins_;
  std::size_t inputs_;
  std::vector<std::vector<double>> partial_;
  std::vector<std::vector<std::uint32_t>> active_;
  std::vector<double> acc_;
  double entropy_ = 0.0;
};

double exact_mi(const TransitionTable& t) {
  double cond = 0.0;
  for (int i = 0; i < t.antennas(); ++i)
    for (std::size_t x = 0; x < t.inputs(); ++x) cond += entropy_bits(t.row(i, x));
  cond /= static_cast<double>(t.inputs());
  OutputEntropy h(t);
  return h.run() - cond;
}

double enumeration_size(const Quantizer& q, int n, const Constellation& c) {
  return std::pow(static_cast<double>(c.size()), n) * std::pow(static_cast<double>(q.bin_count()), n);
}

// Monte Carlo I(X; Y_Q): average of log2 p(y|x) / p(y) over draws.
MiResult mc_quantized(const Quantizer& q, int n, double theta, double sigma2,
                      const Constellation& c, const MiOptions& opt) {
  const std::size_t inputs = input_count(c, n);
  const ChannelMatrix h0 = los_channel(n, theta, 0.0);
  const std::vector<cplx> means0 = noiseless_outputs(h0, c);
  const std::size_t samples = opt.mc_samples;
  std::vector<double> values(samples);
  parallel_for(samples, opt.threads, [&](std::size_t s) {
    CounterRng rng(stream_key(opt.seed, 0x4d49u, s));
    double phi = opt.phi.value;
    if (opt.phi.kind == PhiPolicy::Kind::grid)
      phi = 2.0 * pi * static_cast<double>(s % static_cast<std::size_t>(opt.phi.grid_size)) / opt.phi.grid_size;
    else if (opt.phi.kind == PhiPolicy::Kind::uniform)
      phi = 2.0 * pi * rng.uniform();
    const cplx rot = std::polar(1.0, -phi);
    const std::size_t x = static_cast<std::size_t>(rng() % inputs);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    std::vector<std::size_t> bins(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const cplx y = rot * means0[x * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] +
                     cplx(gauss(rng), gauss(rng));
      bins[static_cast<std::size_t>(i)] = q.index_unchecked(y);
    }
    // log p(y | x') for every x', memoized on distinct means per antenna.
    std::vector<double> logp(inputs, 0.0);
    for (int i = 0; i < n; ++i) {
      std::unordered_map<MeanKey, double, MeanKeyHash> memo;
      const Cell cell = q.cell(bins[static_cast<std::size_t>(i)]);
      for (std::size_t xp = 0; xp < inputs; ++xp) {
        const cplx m = rot * means0[xp * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
        const MeanKey k = key_of(m);
        auto it = memo.find(k);
        if (it == memo.end())
          it = memo.emplace(k, std::log(std::max(cell_prob(m, sigma2, cell), 1e-300))).first;
        logp[xp] += it->second;
      }
    }
    const double mx = *std::max_element(logp.begin(), logp.end());
    double sum = 0.0;
    for (double v : logp) sum += std::exp(v - mx);
    const double log_py = mx + std::log(sum / static_cast<double>(inputs));
    values[s] = (logp[x] - log_py) / std::log(2.0);
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(samples);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples > 1 ? samples - 1 : 1);
  MiResult r;
  r.mi_bits = mean;
  r.stderr_bits = std::sqrt(var / static_cast<double>(samples));
  r.exact = false;
  return r;
}

}  // namespace

TransitionTable transition_table(const Quantizer& q, const ChannelMatrix& h,
                                 const Constellation& c, double sigma2) {
  const int n = h.n;
  const std::size_t inputs = input_count(c, n);
  TransitionTable t(n, inputs, q.bin_count());
  const std::vector<cplx> means = noiseless_outputs(h, c);
  std::vector<Cell> cells;
  cells.reserve(q.bin_count());
  for (std::size_t j = 0; j < q.bin_count(); ++j) cells.push_back(q.cell(j));

  // All antennas share one quantizer, so rows depend only on the mean.
  std::unordered_map<MeanKey, std::vector<double>, MeanKeyHash> memo;
  for (int i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < inputs; ++x) {
      const cplx m = means[x * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)];
      const MeanKey k = key_of(m);
      auto it = memo.find(k);
      if (it == memo.end()) {
        std::vector<double> row(q.bin_count());
        for (std::size_t j = 0; j < q.bin_count(); ++j) row[j] = cell_prob(m, sigma2, cells[j]);
        it = memo.emplace(k, std::move(row)).first;
      }
      std::copy(it->second.begin(), it->second.end(), t.row(i, x).begin());
    }
  }
  return t;
}

double mi_quantized_at(const Quantizer& q, int n, double theta, double phi, double sigma2,
                       const Constellation& c) {
  return exact_mi(transition_table(q, los_channel(n, theta, phi), c, sigma2));
}

MiResult mi_quantized(const Quantizer& q, int n, double theta, double sigma2,
                      const Constellation& c, const MiOptions& opt) {
  MiResult r;
  const bool enumerable = enumeration_size(q, n, c) <= kMaxEnumeration;
  if (!enumerable || opt.phi.kind == PhiPolicy::Kind::uniform) {
    if (!opt.allow_monte_carlo)
      throw CapacityEstimationError(
          enumerable ? "uniform phase policy needs the Monte Carlo estimator"
                     : "exact MI enumeration infeasible (|S|^n T^n > 2^26) and Monte Carlo disabled");
    r = mc_quantized(q, n, theta, sigma2, c, opt);
  } else if (opt.phi.kind == PhiPolicy::Kind::fixed) {
    r.mi_bits = mi_quantized_at(q, n, theta, opt.phi.value, sigma2, c);
  } else {
    const int g = opt.phi.grid_size;
    if (g < 1) throw ConfigError("phase grid size must be positive");
    // A quarter turn of phi maps QPSK/16QAM inputs onto themselves and
    // rotates every output by -pi/2; symmetric quantizers then give the same
    // MI, so only the first quarter of the grid needs evaluating.
    const bool quarter = q.quarter_turn_symmetric() && g % 4 == 0;
    const int distinct = quarter ? g / 4 : g;
    std::vector<double> vals(static_cast<std::size_t>(distinct));
    parallel_for(vals.size(), opt.threads, [&](std::size_t k) {
      const double phi = 2.0 * pi * static_cast<double>(k) / g;
      vals[k] = mi_quantized_at(q, n, theta, phi, sigma2, c);
    });
    double sum = 0.0;
    for (double v : vals) sum += v;
    r.mi_bits = sum / static_cast<double>(distinct);
  }
  r.theta = theta;
  r.snr_db = -10.0 * std::log10(sigma2);
  r.phi_policy = opt.phi.describe();
  r.scheme = q.describe();
  return r;
}

MiResult mi_unquantized(int n, double theta, double sigma2, const Constellation& c,
                        const PhiPolicy& phi, std::size_t samples, std::uint64_t seed) {
  if (samples < 100000) throw ConfigError("mi_unquantized: need at least 10^5 samples");
  const std::size_t inputs = input_count(c, n);
  const ChannelMatrix h0 = los_channel(n, theta, 0.0);
  const std::vector<cplx> means = noiseless_outputs(h0, c);
  const auto nn = static_cast<std::size_t>(n);
  const double sd = std::sqrt(sigma2 / 2.0);

  // Blocks keep the summation order fixed.
  constexpr std::size_t kBlock = 4096;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<double> sums(blocks), sq(blocks);
  parallel_for(blocks, 0, [&](std::size_t b) {
    std::vector<double> d(inputs);
    std::vector<cplx> y(nn);
    double s1 = 0.0, s2 = 0.0;
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t s = b * kBlock; s < end; ++s) {
      CounterRng rng(stream_key(seed, 0x554eu, s));
      std::normal_distribution<double> gauss(0.0, sd);
      double ph = phi.value;
      if (phi.kind == PhiPolicy::Kind::grid)
        ph = 2.0 * pi * static_cast<double>(s % static_cast<std::size_t>(phi.grid_size)) / phi.grid_size;
      else if (phi.kind == PhiPolicy::Kind::uniform)
        ph = 2.0 * pi * rng.uniform();
      const std::size_t x = static_cast<std::size_t>(rng() % inputs);
      // Work in the derotated frame: |Y - e^{-j phi} m| = |e^{j phi} Y - m|.
      const cplx derot = std::polar(1.0, ph);
      const cplx rot = std::conj(derot);
      for (std::size_t i = 0; i < nn; ++i) {
        const cplx yi = rot * means[x * nn + i] + cplx(gauss(rng), gauss(rng));
        y[i] = derot * yi;
      }
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t xp = 0; xp < inputs; ++xp) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nn; ++i) acc += std::norm(y[i] - means[xp * nn + i]);
        d[xp] = acc;
        dmin = std::min(dmin, acc);
      }
      double sum = 0.0;
      for (double v : d) sum += std::exp(-(v - dmin) / sigma2);
      // log2 p(y|x) - log2 mean_x' p(y|x')
      const double val = std::log2(static_cast<double>(inputs)) -
                         ((d[x] - dmin) / sigma2 + std::log(sum)) / std::log(2.0);
      s1 += val;
      s2 += val * val;
    }
    sums[b] = s1;
    sq[b] = s2;
  });
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    s1 += sums[b];
    s2 += sq[b];
  }
  const double ns = static_cast<double>(samples);
  const double mean = s1 / ns;
  const double var = std::max(0.0, (s2 - ns * mean * mean) / (ns - 1.0));
  MiResult r;
  r.mi_bits = mean;
  r.stderr_bits = std::sqrt(var / ns);
  r.exact = false;
  r.theta = theta;
  r.snr_db = -10.0 * std::log10(sigma2);
  r.phi_policy = phi.describe();
  r.scheme = "unquantized";
  return r;
}

MiGap mi_gap(const MiResult& unquantized, const MiResult& quantized) {
  const double err = std::hypot(unquantized.stderr_bits, quantized.stderr_bits);
  return {std::max(unquantized.mi_bits - quantized.mi_bits, -err), err};
}

Confusability noiseless_confusability(const Quantizer& q, int n, double theta, double phi,
                                      const Constellation& c) {
  constexpr double kBoundaryTol = 1e-9;
  const ChannelMatrix h = los_channel(n, theta, phi);
  const std::vector<cplx> means = noiseless_outputs(h, c);
  const std::size_t inputs = input_count(c, n);
  const auto nn = static_cast<std::size_t>(n);
  Confusability out;
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> groups;
  std::vector<std::size_t> tuple(nn);
  for (std::size_t x = 0; x < inputs; ++x) {
    for (std::size_t i = 0; i < nn; ++i) {
      const cplx m = means[x * nn + i];
      if (q.near_boundary(m, kBoundaryTol)) ++out.degenerate_outputs;
      tuple[i] = q.index(m);
    }
    groups[tuple].push_back(x);
  }
  double cond = 0.0;
  for (auto& [key, members] : groups) {
    const double sz = static_cast<double>(members.size());
    cond += sz / static_cast<double>(inputs) * std::log2(sz);
    out.classes.push_back(std::move(members));
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  out.asymptotic_mi_bits = std::log2(static_cast<double>(inputs)) - cond;
  return out;
}

}  // namespace qlos
