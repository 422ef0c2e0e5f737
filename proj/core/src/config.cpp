// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qlos/errors.hpp"
#include "qlos/harness.hpp"

namespace qlos {

using json = nlohmann::json;
using std::numbers::pi;

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    throw ConfigError(std::string(what) + ": not a number: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError(std::string(what) + ": not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

// ---------------------------------------------------------------- enums

PhiPolicy PhiPolicy::parse(std::string_view text) {
  if (text == "avg") return grid(256);
  if (text == "uniform") return uniform();
  if (text.starts_with("grid:")) {
    const int g = parse_int(text.substr(5), "phi grid size");
    if (g < 1) throw ConfigError("phi grid size must be positive");
    return grid(g);
  }
  if (text.starts_with("fixed:")) return fixed(parse_number(text.substr(6), "phi value"));
  throw ConfigError("phi policy must be avg, grid:<n>, uniform or fixed:<rad>; got '" +
                    std::string(text) + "'");
}

std::string PhiPolicy::describe() const {
  switch (kind) {
    case Kind::fixed: return "fixed:" + fmt(value);
    case Kind::grid: return "grid:" + std::to_string(grid_size);
    case Kind::uniform: return "uniform";
  }
  return "uniform";
}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::mi_sweep: return "mi-sweep";
    case Experiment::ber_sweep: return "ber-sweep";
    case Experiment::range_sweep: return "range-sweep";
    case Experiment::design_quantizer: return "design-quantizer";
  }
  return "ber-sweep";
}

std::string_view to_string(DetectorKind d) {
  switch (d) {
    case DetectorKind::ml: return "ml";
    case DetectorKind::zf: return "zf";
    case DetectorKind::vq: return "vq";
  }
  return "zf";
}

Experiment parse_experiment(std::string_view name) {
  for (auto e : {Experiment::mi_sweep, Experiment::ber_sweep, Experiment::range_sweep,
                 Experiment::design_quantizer})
    if (to_string(e) == name) return e;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

DetectorKind parse_detector(std::string_view name) {
  for (auto d : {DetectorKind::ml, DetectorKind::zf, DetectorKind::vq})
    if (to_string(d) == name) return d;
  throw ConfigError("unknown detector '" + std::string(name) + "' (expected ml, zf or vq)");
}

// ---------------------------------------------------------------- schemes

SchemeSpec SchemeSpec::parse(std::string_view text) {
  SchemeSpec s;
  if (text == "unquantized") {
    s.unquantized = true;
    return s;
  }
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError("scheme '" + std::string(text) + "': expected <family>[-<metric>]:<params>");
  const std::string_view head = text.substr(0, colon);
  const std::string_view params = text.substr(colon + 1);
  const std::size_t dash = head.find('-');
  const std::string_view fam = head.substr(0, dash);
  const std::string_view met = dash == std::string_view::npos ? "" : head.substr(dash + 1);
  if (fam == "iq") s.family = QuantizerFamily::iq;
  else if (fam == "ap") s.family = QuantizerFamily::amplitude_phase;
  else if (fam == "phase") s.family = QuantizerFamily::phase_only;
  else throw ConfigError("scheme '" + std::string(text) + "': unknown family '" + std::string(fam) + "'");

  if (s.family == QuantizerFamily::phase_only) {
    if (!met.empty()) throw ConfigError("scheme '" + std::string(text) + "': phase-only takes no design metric");
    s.metric = DesignMetric::fixed;
  } else if (met == "eqprob") s.metric = DesignMetric::equal_prob;
  else if (met == "mmsqe") s.metric = DesignMetric::mmsqe;
  else if (met == "fixed") s.metric = DesignMetric::fixed;
  else throw ConfigError("scheme '" + std::string(text) + "': metric must be eqprob, mmsqe or fixed");

  s.levels = s.family == QuantizerFamily::iq ? 0 : 1;
  bool have_levels = false, have_sectors = false, have_thresholds = false;
  for (std::string_view kv : split(params, ',')) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string_view::npos) throw ConfigError("scheme '" + std::string(text) + "': bad parameter '" + std::string(kv) + "'");
    const std::string_view k = kv.substr(0, eq), v = kv.substr(eq + 1);
    if ((k == "S" && s.family == QuantizerFamily::iq) || (k == "K" && s.family == QuantizerFamily::amplitude_phase)) {
      s.levels = parse_int(v, "scheme levels");
      have_levels = true;
    } else if (k == "M" && s.family != QuantizerFamily::iq) {
      s.sectors = parse_int(v, "scheme sectors");
      have_sectors = true;
    } else if ((k == "T" && s.family == QuantizerFamily::iq) || (k == "A" && s.family == QuantizerFamily::amplitude_phase)) {
      for (std::string_view t : split(v, '/')) s.thresholds.push_back(parse_number(t, "scheme threshold"));
      have_thresholds = true;
    } else {
      throw ConfigError("scheme '" + std::string(text) + "': unexpected parameter '" + std::string(k) + "'");
    }
  }
  if (s.family == QuantizerFamily::iq && !have_levels)
    throw ConfigError("scheme '" + std::string(text) + "': missing S");
  if (s.family != QuantizerFamily::iq && !have_sectors)
    throw ConfigError("scheme '" + std::string(text) + "': missing M");
  if (s.family == QuantizerFamily::amplitude_phase && !have_levels)
    throw ConfigError("scheme '" + std::string(text) + "': missing K");
  const bool fixed_with_rings = s.metric == DesignMetric::fixed && s.family != QuantizerFamily::phase_only;
  if (fixed_with_rings && !have_thresholds)
    throw ConfigError("scheme '" + std::string(text) + "': fixed designs need thresholds");
  if (!fixed_with_rings && have_thresholds)
    throw ConfigError("scheme '" + std::string(text) + "': thresholds only apply to fixed designs");
  if (fixed_with_rings && static_cast<int>(s.thresholds.size()) != s.levels - 1)
    throw ConfigError("scheme '" + std::string(text) + "': expected levels - 1 thresholds");
  return s;
}

std::string SchemeSpec::describe() const {
  if (unquantized) return "unquantized";
  std::ostringstream os;
  os << to_string(family);
  if (family != QuantizerFamily::phase_only) os << '-' << to_string(metric);
  os << ':';
  auto list = [&](char key) {
    os << ',' << key << '=';
    for (std::size_t i = 0; i < thresholds.size(); ++i) os << (i ? "/" : "") << fmt(thresholds[i]);
  };
  if (family == QuantizerFamily::iq) {
    os << "S=" << levels;
    if (metric == DesignMetric::fixed) list('T');
  } else if (family == QuantizerFamily::amplitude_phase) {
    os << "K=" << levels << ",M=" << sectors;
    if (metric == DesignMetric::fixed) list('A');
  } else {
    os << "M=" << sectors;
  }
  return os.str();
}

Quantizer SchemeSpec::build(double sigma2) const {
  if (unquantized) throw ConfigError("the unquantized scheme has no quantizer");
  Quantizer q = [&] {
    switch (family) {
      case QuantizerFamily::phase_only: return design_phase_only(sectors);
      case QuantizerFamily::iq:
        if (metric == DesignMetric::equal_prob) return design_equal_prob_iq(levels, sigma2);
        if (metric == DesignMetric::mmsqe) return design_mmsqe_iq(levels, sigma2);
        return Quantizer::iq(thresholds);
      case QuantizerFamily::amplitude_phase:
        if (metric == DesignMetric::equal_prob) return design_equal_prob_ap(levels, sectors, sigma2);
        if (metric == DesignMetric::mmsqe) return design_mmsqe_ap(levels, sectors, sigma2);
        return Quantizer::amplitude_phase(thresholds, sectors);
    }
    return design_phase_only(sectors);
  }();
  q.attach_codebook(sigma2);
  return q;
}

LosGeometry GeometrySpec::resolve(int array_size) const {
  LosGeometry g;
  g.range_m = range_m;
  g.wavelength_m = LosGeometry::wavelength_from_carrier_ghz(carrier_ghz);
  g.array_size = array_size;
  g.nominal_range_m = nominal_range_m.value_or(range_m);
  g.spacing_m = spacing_m ? *spacing_m : calibrate_spacing(g.nominal_range_m, g.wavelength_m, pi / 2.0);
  g.validate();
  return g;
}

// ---------------------------------------------------------------- SweepConfig

SweepConfig SweepConfig::defaults(Experiment e) {
  SweepConfig c;
  c.experiment = e;
  c.theta_rad = {pi / 2.0};
  switch (e) {
    case Experiment::mi_sweep:
      c.phi = PhiPolicy::grid(256);
      c.schemes = {SchemeSpec::parse("iq-eqprob:S=4")};
      for (int s = 0; s <= 20; s += 2) c.snr_db.push_back(s);
      break;
    case Experiment::ber_sweep:
      c.phi = PhiPolicy::uniform();
      c.detectors = {DetectorKind::zf, DetectorKind::vq};
      for (int s = 10; s <= 40; s += 5) c.snr_db.push_back(s);
      break;
    case Experiment::range_sweep:
      c.phi = PhiPolicy::uniform();
      c.geometry = GeometrySpec{};
      c.detectors = {DetectorKind::zf, DetectorKind::vq};
      c.snr_db = {40.0};
      c.frames = 100000;
      break;
    case Experiment::design_quantizer:
      c.phi = PhiPolicy::grid(256);
      c.schemes = {SchemeSpec::parse("iq-eqprob:S=4")};
      c.snr_db = {10.0};
      break;
  }
  return c;
}

std::uint64_t SweepConfig::effective_frames() const {
  if (frames != 0) return frames;
  return modulation == Modulation::qpsk ? 1000000 : 200000;
}

SchemeSpec SweepConfig::physical_scheme() const {
  if (quantizer) return *quantizer;
  return SchemeSpec::parse("iq-eqprob:S=" + std::to_string(1 << physical_bits));
}

std::vector<double> SweepConfig::thetas() const {
  if (geometry) return {crossover_phase(geometry->resolve(array_size), CrossoverMode::exact)};
  return theta_rad;
}

void SweepConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError("config field '" + field + "': " + msg);
  };
  if (array_size != 2 && array_size != 4) fail("array_size", "must be 2 or 4");
  if (snr_db.empty()) fail("snr_db", "list must not be empty");
  for (double s : snr_db)
    if (!std::isfinite(s)) fail("snr_db", "values must be finite");
  if (!geometry && theta_rad.empty()) fail("theta_rad", "give at least one value or a geometry block");
  for (double t : theta_rad)
    if (!std::isfinite(t)) fail("theta_rad", "values must be finite");
  if (geometry) {
    if (!(geometry->range_m > 0.0)) fail("geometry.range_m", "must be positive");
    if (!(geometry->carrier_ghz > 0.0)) fail("geometry.carrier_ghz", "must be positive");
    if (geometry->spacing_m && !(*geometry->spacing_m > 0.0)) fail("geometry.spacing_m", "must be positive");
    if (geometry->nominal_range_m && !(*geometry->nominal_range_m > 0.0))
      fail("geometry.nominal_range_m", "must be positive");
  }
  if (phi.kind == PhiPolicy::Kind::grid && phi.grid_size < 1) fail("phi", "grid size must be positive");
  if (!std::isfinite(phi.value)) fail("phi", "value must be finite");

  const bool ber = experiment == Experiment::ber_sweep || experiment == Experiment::range_sweep;
  if (ber) {
    if (detectors.empty()) fail("detectors", "list must not be empty");
    if (effective_frames() < 1000) fail("frames", "BER sweeps need at least 1000 frames");
    if (physical_bits < 1 || physical_bits > 5) fail("physical_bits", "must be between 1 and 5");
    if (virtual_extra_bits < 1 || virtual_extra_bits > 2) fail("virtual_extra_bits", "must be 1 or 2");
    const SchemeSpec phys = physical_scheme();
    if (phys.unquantized) fail("quantizer", "BER sweeps need a physical quantizer");
    for (DetectorKind d : detectors) {
      if (d == DetectorKind::vq && (phys.family != QuantizerFamily::iq || phys.metric != DesignMetric::equal_prob))
        fail("detectors", "vq needs an equal-probability I/Q physical quantizer");
      if (d == DetectorKind::ml && modulation == Modulation::qam16 && array_size == 4 && !allow_large_ml)
        fail("detectors", "16QAM 4x4 ML (65536 candidates) needs allow_large_ml = true");
    }
    if (min_errors == 0) fail("min_errors", "must be positive");
  }
  if (experiment == Experiment::range_sweep) {
    if (!geometry) fail("geometry", "range sweeps need a geometry block");
    if (!(range_ratio_start > 0.0 && range_ratio_stop > range_ratio_start))
      fail("range_ratios", "need 0 < start < stop");
    if (range_points < 2) fail("range_ratios.points", "need at least 2 points");
  }
  if (experiment == Experiment::mi_sweep || experiment == Experiment::design_quantizer) {
    if (schemes.empty()) fail("schemes", "list must not be empty");
    for (const auto& s : schemes) {
      if (s.unquantized && experiment == Experiment::design_quantizer)
        fail("schemes", "'unquantized' is not a quantizer design");
      if (s.unquantized && unquantized_samples < 100000) fail("unquantized_samples", "need at least 100000");
    }
    if (mc_samples == 0) fail("mc_samples", "must be positive");
  }
}

// ---------------------------------------------------------------- JSON

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment", "modulation", "array_size", "theta_rad", "geometry", "snr_db", "phi",
    "detectors", "schemes", "quantizer", "physical_bits", "virtual_extra_bits", "frames",
    "early_stop", "min_errors", "min_frames", "allow_large_ml", "mc_samples",
    "allow_monte_carlo", "unquantized_samples", "range_ratios", "seed", "threads", "output"};

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw ConfigError("config field '" + field + "': " + msg);
}

double get_number(const json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    field_error(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

int get_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) field_error(field, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) field_error(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& field) {
  if (!j.is_string()) field_error(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_number()) return {j.get<double>()};
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      if (k != "start" && k != "stop" && k != "step") field_error(field + "." + k, "unknown key");
    for (const char* k : {"start", "stop", "step"})
      if (!j.contains(k)) field_error(field + "." + k, "missing required key");
    const double a = get_number(j["start"], field + ".start");
    const double b = get_number(j["stop"], field + ".stop");
    const double st = get_number(j["step"], field + ".step");
    if (!(st > 0.0) || b < a) field_error(field, "need step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / st + 1e-9)) + 1;
    for (long k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * st);
    return out;
  }
  field_error(field, "expected a number, a list or {start, stop, step}");
}

std::vector<std::string> get_string_list(const json& j, const std::string& field) {
  if (j.is_string()) return {j.get<std::string>()};
  if (!j.is_array()) field_error(field, "expected a string or a list of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_string(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
auto wrap_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.starts_with("config field")) throw;
    field_error(field, what);
  }
}

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

SweepConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!kKnownKeys.contains(k)) field_error(k, "unknown key");
  if (!j.contains("experiment")) field_error("experiment", "missing required key");
  if (!j.contains("snr_db")) field_error("snr_db", "missing required key");

  const Experiment e = wrap_field("experiment", [&] { return parse_experiment(get_string(j["experiment"], "experiment")); });
  SweepConfig c = SweepConfig::defaults(e);
  if (j.contains("modulation"))
    c.modulation = wrap_field("modulation", [&] { return parse_modulation(get_string(j["modulation"], "modulation")); });
  if (j.contains("array_size")) c.array_size = get_int(j["array_size"], "array_size");
  if (j.contains("theta_rad")) {
    c.theta_rad = get_number_list(j["theta_rad"], "theta_rad");
    c.geometry.reset();
  }
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    if (g.is_null()) {
      c.geometry.reset();
    } else {
      if (!g.is_object()) field_error("geometry", "expected an object");
      GeometrySpec gs;
      for (const auto& [k, v] : g.items()) {
        const std::string f = "geometry." + k;
        if (v.is_null() && (k == "spacing_m" || k == "nominal_range_m")) continue;
        if (k == "range_m") gs.range_m = get_number(v, f);
        else if (k == "spacing_m") gs.spacing_m = get_number(v, f);
        else if (k == "carrier_ghz") gs.carrier_ghz = get_number(v, f);
        else if (k == "nominal_range_m") gs.nominal_range_m = get_number(v, f);
        else field_error(f, "unknown key");
      }
      c.geometry = gs;
    }
  }
  c.snr_db = get_number_list(j["snr_db"], "snr_db");
  if (j.contains("phi")) c.phi = wrap_field("phi", [&] { return PhiPolicy::parse(get_string(j["phi"], "phi")); });
  if (j.contains("detectors")) {
    c.detectors.clear();
    for (const auto& d : get_string_list(j["detectors"], "detectors"))
      c.detectors.push_back(wrap_field("detectors", [&] { return parse_detector(d); }));
  }
  if (j.contains("schemes")) {
    c.schemes.clear();
    for (const auto& s : get_string_list(j["schemes"], "schemes"))
      c.schemes.push_back(wrap_field("schemes", [&] { return SchemeSpec::parse(s); }));
  }
  if (j.contains("quantizer")) {
    if (j["quantizer"].is_null()) c.quantizer.reset();
    else c.quantizer = wrap_field("quantizer", [&] { return SchemeSpec::parse(get_string(j["quantizer"], "quantizer")); });
  }
  if (j.contains("physical_bits")) c.physical_bits = get_int(j["physical_bits"], "physical_bits");
  if (j.contains("virtual_extra_bits")) c.virtual_extra_bits = get_int(j["virtual_extra_bits"], "virtual_extra_bits");
  if (j.contains("frames")) c.frames = get_uint(j["frames"], "frames");
  if (j.contains("early_stop")) c.early_stop = get_bool(j["early_stop"], "early_stop");
  if (j.contains("min_errors")) c.min_errors = get_uint(j["min_errors"], "min_errors");
  if (j.contains("min_frames")) c.min_frames = get_uint(j["min_frames"], "min_frames");
  if (j.contains("allow_large_ml")) c.allow_large_ml = get_bool(j["allow_large_ml"], "allow_large_ml");
  if (j.contains("mc_samples")) c.mc_samples = get_uint(j["mc_samples"], "mc_samples");
  if (j.contains("allow_monte_carlo")) c.allow_monte_carlo = get_bool(j["allow_monte_carlo"], "allow_monte_carlo");
  if (j.contains("unquantized_samples")) c.unquantized_samples = get_uint(j["unquantized_samples"], "unquantized_samples");
  if (j.contains("range_ratios")) {
    const json& r = j["range_ratios"];
    if (!r.is_object()) field_error("range_ratios", "expected {start, stop, points}");
    for (const auto& [k, v] : r.items()) {
      const std::string f = "range_ratios." + k;
      if (k == "start") c.range_ratio_start = get_number(v, f);
      else if (k == "stop") c.range_ratio_stop = get_number(v, f);
      else if (k == "points") c.range_points = get_int(v, f);
      else field_error(f, "unknown key");
    }
  }
  if (j.contains("seed")) c.seed = get_uint(j["seed"], "seed");
  if (j.contains("threads")) c.threads = get_int(j["threads"], "threads");
  if (j.contains("output")) c.output = get_string(j["output"], "output");
  c.validate();
  return c;
}

json to_json_value(const SweepConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["modulation"] = std::string(to_string(c.modulation));
  j["array_size"] = c.array_size;
  j["theta_rad"] = c.theta_rad;
  if (c.geometry) {
    json g;
    g["range_m"] = c.geometry->range_m;
    g["carrier_ghz"] = c.geometry->carrier_ghz;
    g["spacing_m"] = c.geometry->spacing_m ? json(*c.geometry->spacing_m) : json(nullptr);
    g["nominal_range_m"] = c.geometry->nominal_range_m ? json(*c.geometry->nominal_range_m) : json(nullptr);
    j["geometry"] = g;
  } else {
    j["geometry"] = nullptr;
  }
  j["snr_db"] = c.snr_db;
  j["phi"] = c.phi.describe();
  json dets = json::array();
  for (auto d : c.detectors) dets.push_back(std::string(to_string(d)));
  j["detectors"] = dets;
  json schemes = json::array();
  for (const auto& s : c.schemes) schemes.push_back(s.describe());
  j["schemes"] = schemes;
  j["quantizer"] = c.quantizer ? json(c.quantizer->describe()) : json(nullptr);
  j["physical_bits"] = c.physical_bits;
  j["virtual_extra_bits"] = c.virtual_extra_bits;
  j["frames"] = c.frames;
  j["early_stop"] = c.early_stop;
  j["min_errors"] = c.min_errors;
  j["min_frames"] = c.min_frames;
  j["allow_large_ml"] = c.allow_large_ml;
  j["mc_samples"] = c.mc_samples;
  j["allow_monte_carlo"] = c.allow_monte_carlo;
  j["unquantized_samples"] = c.unquantized_samples;
  j["range_ratios"] = {{"start", c.range_ratio_start}, {"stop", c.range_ratio_stop}, {"points", c.range_points}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace

SweepConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("config: JSON syntax error at " + line_col(text, e.byte) + ": " + e.what());
  }
  return from_json(j);
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SweepConfig& cfg) { return to_json_value(cfg).dump(); }

std::string config_hash(const SweepConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qlos
