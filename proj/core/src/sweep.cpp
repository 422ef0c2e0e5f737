// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <bit>
#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "qlos/errors.hpp"
#include "qlos/harness.hpp"
#include "qlos/infotheory.hpp"
#include "qlos/parallel.hpp"
#include "qlos/rng.hpp"

namespace qlos {

using std::numbers::pi;

namespace {

// Frames per work unit and work units per early-stop check. Both are fixed so
// the set of simulated frames never depends on the worker count.
constexpr std::uint64_t kChunkFrames = 2048;
constexpr std::size_t kChunksPerWave = 32;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct ChunkResult {
  std::uint64_t frames = 0;
  std::uint64_t errors = 0;
};

class FrameRunner {
 public:
  FrameRunner(const DetectionContext& ctx, DetectorKind kind, const VirtualQuantizer* vq,
              const BerOptions& opt)
      : ctx_(ctx), kind_(kind), opt_(opt) {
    if (kind == DetectorKind::ml) ml_ = std::make_unique<MlDetector>(ctx, opt.allow_large_ml);
    if (kind == DetectorKind::vq) {
      if (vq == nullptr) throw ConfigError("vq detection needs a virtual quantizer");
      vq_ = std::make_unique<VqDetector>(ctx, *vq);
    }
    if (kind != DetectorKind::ml && !ctx.quantizer().has_codebook())
      throw ConfigError("zf/vq detection needs a quantizer codebook");
  }

  ChunkResult run(std::uint64_t first, std::uint64_t count) {
    const int n = ctx_.n();
    const auto nn = static_cast<std::size_t>(n);
    const Constellation& c = ctx_.constellation();
    const int bps = c.bits_per_symbol();
    const std::uint64_t mask = (1ULL << bps) - 1;
    const double sd = std::sqrt(ctx_.sigma2() / 2.0);
    std::size_t sym[4], det[4], bins[4];
    ChunkResult res;
    for (std::uint64_t f = first; f < first + count; ++f) {
      CounterRng rng(stream_key(opt_.seed, opt_.point, f));
      std::size_t x = 0;
      for (std::size_t k = 0; k < nn; ++k) {
        sym[k] = c.point_of_label(static_cast<std::uint32_t>(rng() & mask));
        x = x * c.size() + sym[k];
      }
      double phi = opt_.phi.value;
      if (opt_.phi.kind == PhiPolicy::Kind::uniform)
        phi = 2.0 * pi * rng.uniform();
      else if (opt_.phi.kind == PhiPolicy::Kind::grid)
        phi = 2.0 * pi * static_cast<double>(f % static_cast<std::uint64_t>(opt_.phi.grid_size)) /
              opt_.phi.grid_size;
      const cplx rot = std::polar(1.0, -phi);
      std::normal_distribution<double> gauss(0.0, sd);
      for (int i = 0; i < n; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        const cplx y = rot * ctx_.mean0(x, i) + cplx(re, im);
        bins[i] = ctx_.quantizer().index_unchecked(y);
      }
      const std::span<const std::size_t> yq(bins, nn);
      const std::span<std::size_t> out(det, nn);
      switch (kind_) {
        case DetectorKind::ml: ml_->detect(yq, phi, out); break;
        case DetectorKind::zf: zf_detect(yq, ctx_, phi, out); break;
        case DetectorKind::vq: vq_->detect(yq, phi, out); break;
      }
      for (std::size_t k = 0; k < nn; ++k)
        res.errors += static_cast<std::uint64_t>(std::popcount(c.label(sym[k]) ^ c.label(det[k])));
      ++res.frames;
    }
    return res;
  }

 private:
  const DetectionContext& ctx_;
  DetectorKind kind_;
  const BerOptions& opt_;
  std::unique_ptr<MlDetector> ml_;
  std::unique_ptr<VqDetector> vq_;
};

BerPoint finish(std::uint64_t frames, std::uint64_t errors, const DetectionContext& ctx) {
  BerPoint p;
  p.frames = frames;
  p.bit_errors = errors;
  p.bits = frames * static_cast<std::uint64_t>(ctx.n()) *
           static_cast<std::uint64_t>(ctx.constellation().bits_per_symbol());
  p.ber = p.bits ? static_cast<double>(errors) / static_cast<double>(p.bits) : 0.0;
  p.stderr_ber = p.bits ? std::sqrt(p.ber * (1.0 - p.ber) / static_cast<double>(p.bits)) : 0.0;
  return p;
}

}  // namespace

std::string code_version() {
#ifdef QLOS_VERSION
  return QLOS_VERSION;
#else
  return "unknown";
#endif
}

BerPoint simulate_ber(const DetectionContext& ctx, DetectorKind detector, const VirtualQuantizer* vq,
                      const BerOptions& opt) {
  if (opt.frames == 0) throw ConfigError("simulate_ber: frames must be positive");
  if (opt.phi.kind == PhiPolicy::Kind::grid && opt.phi.grid_size < 1)
    throw ConfigError("simulate_ber: phase grid size must be positive");
  const std::uint64_t chunks = (opt.frames + kChunkFrames - 1) / kChunkFrames;
  std::uint64_t frames = 0, errors = 0;
  std::vector<ChunkResult> wave;
  for (std::uint64_t base = 0; base < chunks; base += kChunksPerWave) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kChunksPerWave, chunks - base));
    wave.assign(count, {});
    parallel_for(count, opt.threads, [&](std::size_t k) {
      const std::uint64_t first = (base + k) * kChunkFrames;
      const std::uint64_t len = std::min(kChunkFrames, opt.frames - first);
      FrameRunner runner(ctx, detector, vq, opt);
      wave[k] = runner.run(first, len);
    });
    for (const auto& r : wave) {
      frames += r.frames;
      errors += r.errors;
      if (opt.early_stop && errors >= opt.min_errors && frames >= opt.min_frames)
        return finish(frames, errors, ctx);
    }
  }
  return finish(frames, errors, ctx);
}

BerPoint simulate_ber_point(int n, double theta, Modulation mod, const SchemeSpec& physical,
                            int virtual_extra_bits, double snr_db, DetectorKind detector,
                            const BerOptions& opt) {
  const double sigma2 = NoiseSpec::from_snr_db(snr_db).sigma2;
  const Constellation c(mod);
  DetectionContext ctx(n, theta, c, physical.build(sigma2), sigma2);
  if (detector == DetectorKind::vq) {
    VirtualQuantizer vq = refine(ctx.quantizer(), 1 << virtual_extra_bits);
    vq.virt.attach_codebook(sigma2);
    return simulate_ber(ctx, detector, &vq, opt);
  }
  return simulate_ber(ctx, detector, nullptr, opt);
}

namespace {

SweepResult start_result(const SweepConfig& cfg) {
  SweepResult r;
  r.experiment = cfg.experiment;
  r.config_json = config_to_json(cfg);
  r.config_hash = config_hash(cfg);
  r.seed = cfg.seed;
  r.code_version = code_version();
  return r;
}

BerOptions ber_options(const SweepConfig& cfg, std::uint64_t point) {
  BerOptions o;
  o.frames = cfg.effective_frames();
  o.early_stop = cfg.early_stop;
  o.min_errors = cfg.min_errors;
  o.min_frames = cfg.min_frames;
  o.phi = cfg.phi;
  o.seed = cfg.seed;
  o.point = point;
  o.threads = cfg.threads;
  o.allow_large_ml = cfg.allow_large_ml;
  return o;
}

BerRow ber_row(const SweepConfig& cfg, double theta, DetectorKind d, const std::string& quantizer,
               double snr, const BerPoint& p, double wall) {
  BerRow row;
  row.experiment = std::string(to_string(cfg.experiment));
  row.modulation = std::string(to_string(cfg.modulation));
  row.n = cfg.array_size;
  row.theta_rad = theta;
  row.phi_policy = cfg.phi.describe();
  row.detector = std::string(to_string(d));
  row.quantizer = quantizer;
  row.snr_db = snr;
  row.frames = p.frames;
  row.bit_errors = p.bit_errors;
  row.ber = p.ber;
  row.stderr_ber = p.stderr_ber;
  row.wall_s = wall;
  return row;
}

}  // namespace

SweepResult run_ber_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result = start_result(cfg);
  const SchemeSpec phys = cfg.physical_scheme();
  std::uint64_t point = 0;
  for (double theta : cfg.thetas()) {
    for (double snr : cfg.snr_db) {
      for (DetectorKind d : cfg.detectors) {
        const auto t0 = std::chrono::steady_clock::now();
        // Point ids depend on the position in the sweep, so adding a detector
        // changes its own streams but detectors at one point share frames.
        const BerPoint p = simulate_ber_point(cfg.array_size, theta, cfg.modulation, phys,
                                              cfg.virtual_extra_bits, snr, d, ber_options(cfg, point));
        result.ber.push_back(ber_row(cfg, theta, d, phys.describe(), snr, p, seconds_since(t0)));
      }
      ++point;
    }
  }
  return result;
}

SweepResult run_range_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result = start_result(cfg);
  const SchemeSpec phys = cfg.physical_scheme();
  const LosGeometry nominal = cfg.geometry->resolve(cfg.array_size);
  std::uint64_t point = 0;
  for (int k = 0; k < cfg.range_points; ++k) {
    const double ratio = cfg.range_ratio_start +
                         (cfg.range_ratio_stop - cfg.range_ratio_start) * k / (cfg.range_points - 1);
    LosGeometry g = nominal;
    g.range_m = ratio * nominal.nominal_range_m;
    const double theta = crossover_phase(g, CrossoverMode::exact);
    for (double snr : cfg.snr_db) {
      for (DetectorKind d : cfg.detectors) {
        const auto t0 = std::chrono::steady_clock::now();
        const BerPoint p = simulate_ber_point(cfg.array_size, theta, cfg.modulation, phys,
                                              cfg.virtual_extra_bits, snr, d, ber_options(cfg, point));
        BerRow row = ber_row(cfg, theta, d, phys.describe(), snr, p, seconds_since(t0));
        row.range_ratio = ratio;
        result.ber.push_back(std::move(row));
      }
      ++point;
    }
  }
  return result;
}

SweepResult run_mi_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result = start_result(cfg);
  const Constellation c(cfg.modulation);
  std::uint64_t point = 0;
  for (const auto& scheme : cfg.schemes) {
    for (double theta : cfg.thetas()) {
      for (double snr : cfg.snr_db) {
        const auto t0 = std::chrono::steady_clock::now();
        const double sigma2 = NoiseSpec::from_snr_db(snr).sigma2;
        MiResult mi;
        const std::uint64_t seed = stream_key(cfg.seed, point++);
        if (scheme.unquantized) {
          mi = mi_unquantized(cfg.array_size, theta, sigma2, c, cfg.phi, cfg.unquantized_samples, seed);
        } else {
          MiOptions opt;
          opt.phi = cfg.phi;
          opt.allow_monte_carlo = cfg.allow_monte_carlo;
          opt.mc_samples = cfg.mc_samples;
          opt.seed = seed;
          opt.threads = cfg.threads;
          mi = mi_quantized(scheme.build(sigma2), cfg.array_size, theta, sigma2, c, opt);
        }
        MiRow row;
        row.experiment = std::string(to_string(cfg.experiment));
        row.modulation = std::string(to_string(cfg.modulation));
        row.n = cfg.array_size;
        row.theta_rad = theta;
        row.phi_policy = cfg.phi.describe();
        row.scheme = scheme.describe();
        row.snr_db = snr;
        row.mi_bits = mi.mi_bits;
        row.stderr_bits = mi.stderr_bits;
        row.exact = mi.exact;
        row.wall_s = seconds_since(t0);
        result.mi.push_back(std::move(row));
      }
    }
  }
  return result;
}

SweepResult run_design_quantizer(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult result = start_result(cfg);
  for (const auto& scheme : cfg.schemes)
    for (double snr : cfg.snr_db)
      result.quantizers.push_back(quantizer_to_json(scheme.build(NoiseSpec::from_snr_db(snr).sigma2)));
  return result;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::mi_sweep: return run_mi_sweep(cfg);
    case Experiment::ber_sweep: return run_ber_sweep(cfg);
    case Experiment::range_sweep: return run_range_sweep(cfg);
    case Experiment::design_quantizer: return run_design_quantizer(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace qlos
