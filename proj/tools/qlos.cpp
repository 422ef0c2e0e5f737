// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors
//
// qlos command line front end.
//
//   qlos design-quantizer|mi-sweep|ber-sweep|range-sweep [--config FILE] [options]
//
// Options given on the command line override the configuration file. Exit
// codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlos/errors.hpp"
#include "qlos/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> threads;
  std::optional<std::uint64_t> frames;
  std::string family;
  std::optional<int> bins;
  std::optional<int> sectors;
  std::string metric;
  std::vector<std::string> schemes;
  std::vector<double> theta;
  std::vector<double> snr_db;
  std::string snr_range;
  std::string phi;
  std::string mod;
  std::vector<std::string> detectors;
  std::optional<int> physical_bits;
  std::optional<int> virtual_extra_bits;
  std::optional<int> array_size;
  bool no_early_stop = false;
  bool allow_large_ml = false;
};

std::vector<double> parse_range(const std::string& text) {
  // a:b:step, inclusive of b.
  std::vector<double> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(':', start);
    const std::string piece = text.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw qlos::ConfigError("--snr-db-range: expected a:b:step, got '" + text + "'");
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
    throw qlos::ConfigError("--snr-db-range: expected a:b:step with step > 0 and b >= a");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
  for (long k = 0; k < count; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
  return out;
}

// Builds a scheme from --family/--bins/--sectors/--metric.
qlos::SchemeSpec scheme_from_flags(const Overrides& o) {
  const std::string family = o.family.empty() ? "iq" : o.family;
  const std::string metric = o.metric.empty() ? "eqprob" : o.metric;
  const int bins = o.bins.value_or(16);
  if (family == "iq") {
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(bins))));
    if (s * s != bins) throw qlos::ConfigError("--bins: I/Q quantizers need a square bin count");
    return qlos::SchemeSpec::parse("iq-" + metric + ":S=" + std::to_string(s));
  }
  if (family == "phase") return qlos::SchemeSpec::parse("phase:M=" + std::to_string(bins));
  if (family == "ap") {
    const int m = o.sectors.value_or(8);
    if (m < 1 || bins % m != 0) throw qlos::ConfigError("--bins must be a multiple of --sectors");
    return qlos::SchemeSpec::parse("ap-" + metric + ":K=" + std::to_string(bins / m) + ",M=" + std::to_string(m));
  }
  throw qlos::ConfigError("--family must be iq, ap or phase");
}

qlos::SweepConfig build_config(qlos::Experiment e, const Overrides& o) {
  qlos::SweepConfig cfg = o.config.empty() ? qlos::SweepConfig::defaults(e) : qlos::load_config(o.config);
  if (!o.config.empty() && cfg.experiment != e)
    throw qlos::ConfigError("config experiment '" + std::string(qlos::to_string(cfg.experiment)) +
                            "' does not match subcommand '" + std::string(qlos::to_string(e)) + "'");
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.output = o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.frames) cfg.frames = *o.frames;
  if (o.array_size) cfg.array_size = *o.array_size;
  if (!o.mod.empty()) cfg.modulation = qlos::parse_modulation(o.mod);
  if (!o.phi.empty()) cfg.phi = qlos::PhiPolicy::parse(o.phi);
  if (!o.theta.empty()) {
    cfg.theta_rad = o.theta;
    cfg.geometry.reset();
  }
  if (!o.snr_db.empty()) cfg.snr_db = o.snr_db;
  if (!o.snr_range.empty()) cfg.snr_db = parse_range(o.snr_range);
  if (!o.detectors.empty()) {
    cfg.detectors.clear();
    for (const auto& d : o.detectors) cfg.detectors.push_back(qlos::parse_detector(d));
  }
  if (o.physical_bits) {
    cfg.physical_bits = *o.physical_bits;
    cfg.quantizer.reset();
  }
  if (o.virtual_extra_bits) cfg.virtual_extra_bits = *o.virtual_extra_bits;
  if (o.no_early_stop) cfg.early_stop = false;
  if (o.allow_large_ml) cfg.allow_large_ml = true;

  const bool flag_scheme = !o.family.empty() || o.bins || o.sectors || !o.metric.empty();
  if (!o.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : o.schemes) cfg.schemes.push_back(qlos::SchemeSpec::parse(s));
  } else if (flag_scheme && (e == qlos::Experiment::mi_sweep || e == qlos::Experiment::design_quantizer)) {
    cfg.schemes = {scheme_from_flags(o)};
  }
  if (flag_scheme && (e == qlos::Experiment::ber_sweep || e == qlos::Experiment::range_sweep))
    cfg.quantizer = scheme_from_flags(o);
  cfg.validate();
  return cfg;
}

void add_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output path; writes <stem>.csv and <stem>.json");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sub->add_option("--frames", o.frames, "frames per BER point");
  sub->add_option("--array-size", o.array_size, "antennas per side (2 or 4)");
  sub->add_option("--mod", o.mod, "qpsk or 16qam");
  sub->add_option("--phi", o.phi, "avg | grid:<n> | uniform | fixed:<rad>");
  sub->add_option("--theta", o.theta, "cross-over phase in radians (repeatable)");
  sub->add_option("--snr-db", o.snr_db, "SNR points in dB (repeatable)");
  sub->add_option("--snr-db-range", o.snr_range, "SNR range a:b:step in dB");
  sub->add_option("--scheme", o.schemes, "quantizer scheme, e.g. iq-eqprob:S=4 (repeatable)");
  sub->add_option("--family", o.family, "quantizer family: iq, ap or phase");
  sub->add_option("--bins", o.bins, "total quantizer cells");
  sub->add_option("--sectors", o.sectors, "phase sectors for ap quantizers");
  sub->add_option("--metric", o.metric, "design rule: eqprob, mmsqe or fixed");
  sub->add_option("--detector", o.detectors, "ml, zf or vq (repeatable)");
  sub->add_option("--physical-bits", o.physical_bits, "physical I/Q bits per axis");
  sub->add_option("--virtual-extra-bits", o.virtual_extra_bits, "virtual refinement bits per axis");
  sub->add_flag("--no-early-stop", o.no_early_stop, "simulate every requested frame");
  sub->add_flag("--allow-large-ml", o.allow_large_ml, "permit 16QAM 4x4 ML detection");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlos: LoS MIMO simulator with low-precision ADCs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qlos::code_version());

  Overrides o;
  struct Entry {
    const char* name;
    qlos::Experiment e;
    const char* help;
  };
  const Entry entries[] = {
      {"design-quantizer", qlos::Experiment::design_quantizer, "design quantizers and print them as JSON"},
      {"mi-sweep", qlos::Experiment::mi_sweep, "mutual information versus SNR"},
      {"ber-sweep", qlos::Experiment::ber_sweep, "bit error rate versus SNR"},
      {"range-sweep", qlos::Experiment::range_sweep, "bit error rate versus link range"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& en : entries) {
    subs.push_back(app.add_subcommand(en.name, en.help));
    add_options(subs.back(), o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    qlos::Experiment e = qlos::Experiment::ber_sweep;
    for (std::size_t k = 0; k < subs.size(); ++k)
      if (subs[k]->parsed()) e = entries[k].e;
    const qlos::SweepConfig cfg = build_config(e, o);
    const qlos::SweepResult result = qlos::run_sweep(cfg);
    if (cfg.output.empty()) {
      if (e == qlos::Experiment::design_quantizer)
        std::cout << qlos::emit_json(result) << '\n';
      else
        std::cout << qlos::emit_csv(result);
    } else {
      for (const auto& p : qlos::write_outputs(result, cfg.output)) std::cerr << "wrote " << p << '\n';
    }
    return 0;
  } catch (const qlos::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qlos::InputShapeError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qlos::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
