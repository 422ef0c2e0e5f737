// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qlos/errors.hpp"
#include "qlos/harness.hpp"

namespace qlos {

using json = nlohmann::json;

namespace {

// Shortest decimal that reads back as the same double.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string quantizer_to_json(const Quantizer& q, int indent) {
  json j;
  j["family"] = std::string(to_string(q.family()));
  j["metric"] = std::string(to_string(q.metric()));
  j["scheme"] = q.describe();
  j["levels"] = q.levels();
  j["sectors"] = q.sectors();
  j["bins"] = q.bin_count();
  j["thresholds"] = std::vector<double>(q.thresholds().begin(), q.thresholds().end());
  j["design_sigma2"] = finite_or_null(q.design_sigma2());
  json cb = json::array();
  for (cplx c : q.codebook()) cb.push_back({c.real(), c.imag()});
  j["codebook"] = cb;
  return j.dump(indent);
}

std::string emit_csv(const SweepResult& r) {
  std::ostringstream os;
  if (r.experiment == Experiment::mi_sweep) {
    os << "experiment,modulation,n,theta_rad,phi_policy,scheme,snr_db,mi_bits,stderr\n";
    for (const auto& m : r.mi)
      os << m.experiment << ',' << m.modulation << ',' << m.n << ',' << num(m.theta_rad) << ','
         << csv_field(m.phi_policy) << ',' << csv_field(m.scheme) << ',' << num(m.snr_db) << ','
         << num(m.mi_bits) << ',' << num(m.stderr_bits) << '\n';
    return os.str();
  }
  if (r.experiment == Experiment::design_quantizer) {
    os << "scheme,design_sigma2,bins,thresholds\n";
    for (const auto& doc : r.quantizers) {
      const json q = json::parse(doc);
      std::string thr;
      for (const auto& t : q["thresholds"]) thr += (thr.empty() ? "" : " ") + num(t.get<double>());
      os << csv_field(q["scheme"].get<std::string>()) << ','
         << (q["design_sigma2"].is_null() ? std::string() : num(q["design_sigma2"].get<double>())) << ','
         << q["bins"].get<std::size_t>() << ',' << thr << '\n';
    }
    return os.str();
  }
  const bool range = r.experiment == Experiment::range_sweep;
  os << "experiment,modulation,n,theta_rad,phi_policy,detector,quantizer,snr_db,frames,bit_errors,ber,stderr";
  os << (range ? ",range_ratio\n" : "\n");
  for (const auto& b : r.ber) {
    os << b.experiment << ',' << b.modulation << ',' << b.n << ',' << num(b.theta_rad) << ','
       << csv_field(b.phi_policy) << ',' << b.detector << ',' << csv_field(b.quantizer) << ','
       << num(b.snr_db) << ',' << b.frames << ',' << b.bit_errors << ',' << num(b.ber) << ','
       << num(b.stderr_ber);
    if (range) os << ',' << num(b.range_ratio.value_or(std::nan("")));
    os << '\n';
  }
  return os.str();
}

std::string emit_json(const SweepResult& r) {
  json j;
  j["metadata"] = {{"experiment", std::string(to_string(r.experiment))},
                   {"config_hash", r.config_hash},
                   {"seed", r.seed},
                   {"code_version", r.code_version}};
  j["config"] = r.config_json.empty() ? json(nullptr) : json::parse(r.config_json);
  json rows = json::array();
  for (const auto& m : r.mi)
    rows.push_back({{"experiment", m.experiment}, {"modulation", m.modulation}, {"n", m.n},
                    {"theta_rad", m.theta_rad}, {"phi_policy", m.phi_policy}, {"scheme", m.scheme},
                    {"snr_db", m.snr_db}, {"metric", "mi_bits"}, {"value", m.mi_bits},
                    {"stderr", m.stderr_bits}, {"exact", m.exact}, {"wall_s", m.wall_s}});
  for (const auto& b : r.ber) {
    json row = {{"experiment", b.experiment}, {"modulation", b.modulation}, {"n", b.n},
                {"theta_rad", b.theta_rad}, {"phi_policy", b.phi_policy}, {"detector", b.detector},
                {"quantizer", b.quantizer}, {"snr_db", b.snr_db}, {"metric", "ber"},
                {"value", b.ber}, {"stderr", b.stderr_ber}, {"frames", b.frames},
                {"bit_errors", b.bit_errors}, {"wall_s", b.wall_s}};
    if (b.range_ratio) row["range_ratio"] = *b.range_ratio;
    rows.push_back(std::move(row));
  }
  for (const auto& doc : r.quantizers) rows.push_back(json::parse(doc));
  j["rows"] = rows;
  return j.dump(2);
}

ResultMetadata parse_result_metadata(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("result JSON: ") + e.what());
  }
  if (!j.contains("metadata") || !j.contains("config"))
    throw ConfigError("result JSON: missing metadata or config block");
  ResultMetadata m;
  const json& md = j["metadata"];
  m.config_hash = md.value("config_hash", "");
  m.seed = md.value("seed", std::uint64_t{0});
  m.code_version = md.value("code_version", "");
  m.config = parse_config(j["config"].dump());
  return m;
}

std::vector<std::string> write_outputs(const SweepResult& r, const std::string& path) {
  std::string stem = path;
  for (const char* ext : {".csv", ".json"}) {
    const std::string e = ext;
    if (stem.size() > e.size() && stem.compare(stem.size() - e.size(), e.size(), e) == 0)
      stem.resize(stem.size() - e.size());
  }
  const std::vector<std::string> paths = {stem + ".csv", stem + ".json"};
  const std::string bodies[2] = {emit_csv(r), emit_json(r)};
  for (int k = 0; k < 2; ++k) {
    std::ofstream out(paths[static_cast<std::size_t>(k)], std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + paths[static_cast<std::size_t>(k)] + "'");
    out << bodies[k];
  }
  return paths;
}

}  // namespace qlos
