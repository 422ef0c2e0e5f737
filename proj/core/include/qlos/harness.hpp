// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlos/channel.hpp"
#include "qlos/constellation.hpp"
#include "qlos/detection.hpp"
#include "qlos/phi_policy.hpp"
#include "qlos/quantizer.hpp"

namespace qlos {

enum class Experiment { mi_sweep, ber_sweep, range_sweep, design_quantizer };
enum class DetectorKind { ml, zf, vq };

std::string_view to_string(Experiment e);
std::string_view to_string(DetectorKind d);
Experiment parse_experiment(std::string_view name);
DetectorKind parse_detector(std::string_view name);

/// A quantizer family plus design rule, written in the same text form that
/// Quantizer::describe() produces:
///   "iq-eqprob:S=4", "iq-mmsqe:S=4", "iq-fixed:S=3,T=-0.5/0.5",
///   "ap-eqprob:K=2,M=8", "ap-mmsqe:K=2,M=8", "ap-fixed:K=2,M=8,A=1",
///   "phase:M=8", and "unquantized" (MI sweeps only).
struct SchemeSpec {
  bool unquantized = false;
  QuantizerFamily family = QuantizerFamily::iq;
  DesignMetric metric = DesignMetric::equal_prob;
  int levels = 4;
  int sectors = 0;
  std::vector<double> thresholds;  // fixed designs only

  static SchemeSpec parse(std::string_view text);
  std::string describe() const;

  /// Designs the quantizer for noise variance sigma2 and attaches its
  /// centroid codebook. Throws ConfigError for "unquantized".
  Quantizer build(double sigma2) const;
};

/// Geometry block of a sweep configuration. When `spacing_m` is absent the
/// spacing is calibrated so that the exact cross-over phase at the nominal
/// range is pi/2.
struct GeometrySpec {
  double range_m = 100.0;
  std::optional<double> spacing_m;
  double carrier_ghz = 140.0;
  std::optional<double> nominal_range_m;

  LosGeometry resolve(int array_size) const;
};

struct SweepConfig {
  Experiment experiment = Experiment::ber_sweep;
  Modulation modulation = Modulation::qpsk;
  int array_size = 4;
  std::vector<double> theta_rad;          // used when geometry is absent
  std::optional<GeometrySpec> geometry;
  std::vector<double> snr_db;
  PhiPolicy phi = PhiPolicy::uniform();
  std::vector<DetectorKind> detectors;
  std::vector<SchemeSpec> schemes;        // MI sweeps and quantizer design
  std::optional<SchemeSpec> quantizer;    // BER physical quantizer; default iq-eqprob:S=2^physical_bits
  int physical_bits = 2;
  int virtual_extra_bits = 1;
  std::uint64_t frames = 0;               // 0: 10^6 for QPSK, 2*10^5 for 16QAM
  bool early_stop = true;
  std::uint64_t min_errors = 200;
  std::uint64_t min_frames = 10000;
  bool allow_large_ml = false;
  std::size_t mc_samples = 20000;         // quantized MI fallback
  bool allow_monte_carlo = false;
  std::size_t unquantized_samples = 200000;
  double range_ratio_start = 0.8;
  double range_ratio_stop = 1.2;
  int range_points = 21;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string output;

  /// Defaults for one experiment kind (mirrors the sample configs).
  static SweepConfig defaults(Experiment e);

  std::uint64_t effective_frames() const;

  /// Physical quantizer spec used by BER sweeps.
  SchemeSpec physical_scheme() const;

  /// Cross-over phases covered by the sweep (geometry wins over theta_rad).
  std::vector<double> thetas() const;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Strict JSON parsing: unknown keys, wrong types and missing required keys
/// raise ConfigError with the field name (and line/column for syntax errors).
SweepConfig parse_config(std::string_view json_text);
SweepConfig load_config(const std::string& path);

/// Canonical JSON form of a configuration: sorted keys, every field present,
/// execution-only fields (threads, output) left out.
std::string config_to_json(const SweepConfig& cfg);
/// 16 hex digits of FNV-1a 64 over config_to_json(cfg).
std::string config_hash(const SweepConfig& cfg);

struct BerRow {
  std::string experiment;
  std::string modulation;
  int n = 0;
  double theta_rad = 0.0;
  std::string phi_policy;
  std::string detector;
  std::string quantizer;
  double snr_db = 0.0;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double stderr_ber = 0.0;
  double wall_s = 0.0;
  std::optional<double> range_ratio;
};

struct MiRow {
  std::string experiment;
  std::string modulation;
  int n = 0;
  double theta_rad = 0.0;
  std::string phi_policy;
  std::string scheme;
  double snr_db = 0.0;
  double mi_bits = 0.0;
  double stderr_bits = 0.0;
  bool exact = true;
  double wall_s = 0.0;
};

struct SweepResult {
  Experiment experiment = Experiment::ber_sweep;
  std::vector<BerRow> ber;
  std::vector<MiRow> mi;
  std::vector<std::string> quantizers;  // JSON documents from design-quantizer
  std::string config_json;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string code_version;
};

std::string code_version();

/// One BER operating point.
struct BerOptions {
  std::uint64_t frames = 1000000;
  bool early_stop = false;
  std::uint64_t min_errors = 200;
  std::uint64_t min_frames = 10000;
  PhiPolicy phi = PhiPolicy::uniform();
  std::uint64_t seed = 1;
  std::uint64_t point = 0;  // sweep point id mixed into every frame stream
  int threads = 0;
  bool allow_large_ml = false;
};

struct BerPoint {
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t bits = 0;
  double ber = 0.0;
  double stderr_ber = 0.0;
};

/// Frame loop: random bits -> symbols, phase per policy, channel, noise,
/// quantize, detect, count bit errors. `vq` is required for DetectorKind::vq.
/// Frames run in fixed chunks so the counts depend only on (seed, point),
/// never on the worker count; early stopping is checked in chunk order.
BerPoint simulate_ber(const DetectionContext& ctx, DetectorKind detector,
                      const VirtualQuantizer* vq, const BerOptions& opt);

/// Builds the physical (and for VQ, virtual) quantizer for sigma2 and runs
/// one point.
BerPoint simulate_ber_point(int n, double theta, Modulation mod, const SchemeSpec& physical,
                            int virtual_extra_bits, double snr_db, DetectorKind detector,
                            const BerOptions& opt);

SweepResult run_ber_sweep(const SweepConfig& cfg);
SweepResult run_mi_sweep(const SweepConfig& cfg);
SweepResult run_range_sweep(const SweepConfig& cfg);
SweepResult run_design_quantizer(const SweepConfig& cfg);
SweepResult run_sweep(const SweepConfig& cfg);

/// CSV with the documented column order. BER:
///   experiment,modulation,n,theta_rad,phi_policy,detector,quantizer,snr_db,frames,bit_errors,ber,stderr
/// range sweeps append range_ratio; MI:
///   experiment,modulation,n,theta_rad,phi_policy,scheme,snr_db,mi_bits,stderr
std::string emit_csv(const SweepResult& r);
/// JSON: {"metadata": {...}, "config": {...}, "rows": [...]}.
std::string emit_json(const SweepResult& r);

struct ResultMetadata {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string code_version;
  SweepConfig config;
};
/// Reads back the metadata and embedded configuration of emit_json output.
ResultMetadata parse_result_metadata(std::string_view json_text);

/// Writes `<stem>.csv` and `<stem>.json` for an output path (a trailing
/// .csv or .json is stripped). Returns the two paths.
std::vector<std::string> write_outputs(const SweepResult& r, const std::string& path);

}  // namespace qlos
