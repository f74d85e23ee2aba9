#include "pghz/serialize.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pghz {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed,
                  const std::string& what) {
  if (!j.is_object()) {
    throw std::invalid_argument(what + " must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " + what);
    }
  }
}

double number_field(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number()) {
    throw std::invalid_argument("field '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::uint64_t unsigned_field(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number_unsigned()) {
    throw std::invalid_argument("field '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Json finite_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

std::string format_g(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace

std::string basis_name(PolarizationBasis basis) {
  switch (basis) {
    case PolarizationBasis::HV:
      return "HV";
    case PolarizationBasis::DA:
      return "DA";
    case PolarizationBasis::RL:
      return "RL";
  }
  throw std::invalid_argument("unknown basis");
}

PolarizationBasis basis_from_name(const std::string& name) {
  if (name == "HV") return PolarizationBasis::HV;
  if (name == "DA") return PolarizationBasis::DA;
  if (name == "RL") return PolarizationBasis::RL;
  throw std::invalid_argument("unknown basis name '" + name + "'");
}

std::string noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone:
      return "none";
    case NoiseKind::kWhite:
      return "white";
    case NoiseKind::kDephasing:
      return "dephasing";
    case NoiseKind::kDepolarizingLocal:
      return "depolarizing_local";
  }
  throw std::invalid_argument("unknown noise kind");
}

NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "none") return NoiseKind::kNone;
  if (name == "white") return NoiseKind::kWhite;
  if (name == "dephasing") return NoiseKind::kDephasing;
  if (name == "depolarizing_local") return NoiseKind::kDepolarizingLocal;
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

Json counts_record_to_json(const CountsRecord& record) {
  Json setting = Json::array();
  for (PolarizationBasis basis : record.bases) setting.push_back(basis_name(basis));
  Json counts = Json::array();
  for (std::uint64_t c : record.counts) counts.push_back(c);
  return Json{{"setting", setting},
              {"counts", counts},
              {"duration_s", record.duration_s},
              {"seed", record.seed},
              {"rate_hz", record.rate_hz}};
}

CountsRecord counts_record_from_json(const Json& j) {
  require_keys(j, {"setting", "counts", "duration_s", "seed", "rate_hz"},
               "counts record");
  CountsRecord record;
  const Json& setting = j.at("setting");
  if (!setting.is_array() || setting.empty()) {
    throw std::invalid_argument("'setting' must be a non-empty array");
  }
  for (const Json& entry : setting) {
    if (entry.is_string()) {
      record.bases.push_back(basis_from_name(entry.get<std::string>()));
    } else if (entry.is_number_integer()) {
      const int k = entry.get<int>();
      if (k == 1) {
        record.bases.push_back(PolarizationBasis::DA);
      } else if (k == 2) {
        record.bases.push_back(PolarizationBasis::RL);
      } else {
        throw std::invalid_argument("setting integers must be 1 or 2");
      }
    } else {
      throw std::invalid_argument("setting entries must be strings or integers");
    }
  }
  const Json& counts = j.at("counts");
  const std::size_t expected = std::size_t{1} << record.bases.size();
  if (!counts.is_array() || counts.size() != expected) {
    throw std::invalid_argument("'counts' must be an array of 2^n integers");
  }
  for (const Json& c : counts) {
    if (!c.is_number_unsigned()) {
      throw std::invalid_argument("counts must be non-negative integers");
    }
    record.counts.push_back(c.get<std::uint64_t>());
  }
  record.duration_s = number_field(j, "duration_s");
  record.seed = unsigned_field(j, "seed");
  record.rate_hz = j.contains("rate_hz") ? number_field(j, "rate_hz") : 0.0;
  return record;
}

Json bell_result_to_json(double theta, const BellRunResult& result) {
  Json e = Json::array();
  Json sigma = Json::array();
  for (const CorrelationEstimate& estimate : result.estimates) {
    e.push_back(estimate.e);
    sigma.push_back(estimate.sigma);
  }
  return Json{{"theta", theta},
              {"S", result.s},
              {"sigma_S", result.sigma_s},
              {"per_setting_E", e},
              {"per_setting_sigma", sigma},
              {"classical_bound", kClassicalBound},
              {"quantum_max", kQuantumMax}};
}

Json witness_result_to_json(const WitnessEstimate& estimate) {
  return Json{{"theta", estimate.theta},
              {"witness", estimate.value},
              {"sigma", estimate.sigma},
              {"significance_sd", finite_or_null(estimate.significance)},
              {"method", estimate.method}};
}

Json tomography_set_to_json(const TomographySet& set) {
  Json array = Json::array();
  for (const TomographyRecord& record : set) {
    Json labels = Json::array();
    for (char label : record.labels) labels.push_back(std::string(1, label));
    array.push_back(Json{{"labels", labels},
                         {"counts", record.counts},
                         {"duration_s", record.duration_s}});
  }
  return array;
}

TomographySet tomography_set_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("tomography set must be a non-empty JSON array");
  }
  TomographySet set;
  set.reserve(j.size());
  for (const Json& entry : j) {
    require_keys(entry, {"labels", "counts", "duration_s"}, "tomography record");
    TomographyRecord record;
    const Json& labels = entry.at("labels");
    if (labels.is_string()) {
      record.labels = labels.get<std::string>();
    } else if (labels.is_array()) {
      for (const Json& label : labels) {
        const auto text = label.get<std::string>();
        if (text.size() != 1) {
          throw std::invalid_argument("each label must be a single character");
        }
        record.labels += text;
      }
    } else {
      throw std::invalid_argument("'labels' must be a string or array of characters");
    }
    if (!entry.at("counts").is_number_unsigned()) {
      throw std::invalid_argument("'counts' must be a non-negative integer");
    }
    record.counts = entry.at("counts").get<std::uint64_t>();
    record.duration_s =
        entry.contains("duration_s") ? number_field(entry, "duration_s") : 1.0;
    set.push_back(std::move(record));
  }
  return set;
}

Json tomography_result_to_json(const MleResult& fit, const FidelityEstimate& fidelity) {
  const Matrix& rho = fit.rho.entries();
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      re_row.push_back(rho(r, c).real());
      im_row.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return Json{{"rho_re", re},
              {"rho_im", im},
              {"F", fidelity.value},
              {"sigma_F", fidelity.sigma},
              {"log_likelihood", fit.log_likelihood},
              {"iterations", fit.iterations}};
}

Json lhv_result_to_json(const LhvResult& result, int num_parties) {
  Json strategy = Json::array();
  for (const std::array<int, 2>& outcomes : result.strategy.outcomes) {
    strategy.push_back(Json::array({outcomes[0], outcomes[1]}));
  }
  return Json{{"num_parties", num_parties},
              {"bound", result.max_s},
              {"strategy", strategy}};
}

Json expectations_to_json(double theta, const BellRunResult& result) {
  Json entries = Json::array();
  for (std::size_t k = 0; k < result.estimates.size(); ++k) {
    const SettingVector setting = SettingVector::from_index(4, k);
    Json bases = Json::array();
    for (PolarizationBasis basis : to_bases(setting)) {
      bases.push_back(basis_name(basis));
    }
    const double ideal =
        std::cos(theta - setting.count_circular() * kPi / 2.0);
    entries.push_back(Json{{"setting", bases},
                           {"e", result.estimates[k].e},
                           {"sigma", result.estimates[k].sigma},
                           {"ideal", ideal}});
  }
  return Json{{"theta", theta}, {"entries", entries}};
}

Json config_to_json(const ExperimentConfig& config) {
  return Json{{"theta", config.theta},
              {"noise",
               Json{{"kind", noise_kind_name(config.noise.kind)},
                    {"parameter", config.noise.parameter}}},
              {"fourfold_rate_hz", config.fourfold_rate_hz},
              {"duration_s", config.duration_s},
              {"seed", config.seed},
              {"coincidence_window_ns", config.coincidence_window_ns},
              {"sampled", config.sampled}};
}

ExperimentConfig config_from_json(const Json& j) {
  require_keys(j,
               {"theta", "noise", "fourfold_rate_hz", "duration_s", "seed",
                "coincidence_window_ns", "sampled"},
               "config");
  if (!j.contains("seed")) {
    throw std::invalid_argument("config must provide a 'seed'");
  }
  ExperimentConfig config;
  config.seed = unsigned_field(j, "seed");
  if (j.contains("theta")) {
    const Json& theta = j.at("theta");
    if (theta.is_number()) {
      config.theta = theta.get<double>();
    } else if (theta.is_string()) {
      config.theta = parse_theta(theta.get<std::string>());
    } else {
      throw std::invalid_argument("'theta' must be a number or string");
    }
  }
  if (j.contains("noise")) {
    const Json& noise = j.at("noise");
    require_keys(noise, {"kind", "parameter"}, "noise model");
    if (noise.contains("kind")) {
      config.noise.kind = noise_kind_from_name(noise.at("kind").get<std::string>());
    }
    if (noise.contains("parameter")) {
      config.noise.parameter = number_field(noise, "parameter");
    }
  }
  if (j.contains("fourfold_rate_hz")) {
    config.fourfold_rate_hz = number_field(j, "fourfold_rate_hz");
  }
  if (j.contains("duration_s")) {
    config.duration_s = number_field(j, "duration_s");
  }
  if (j.contains("coincidence_window_ns")) {
    config.coincidence_window_ns = number_field(j, "coincidence_window_ns");
  }
  if (j.contains("sampled")) {
    const Json& sampled = j.at("sampled");
    if (!sampled.is_boolean()) {
      throw std::invalid_argument("'sampled' must be a boolean");
    }
    config.sampled = sampled.get<bool>();
  }
  validate_config(config);
  return config;
}

std::string scan_to_csv(const std::vector<ScanPoint>& points) {
  std::string csv = "theta,S,sigma_S,quantum_prediction,classical_bound\n";
  for (const ScanPoint& point : points) {
    csv += format_g(point.theta) + "," + format_g(point.s) + "," +
           format_g(point.sigma_s) + "," + format_g(point.quantum_prediction) +
           "," + format_g(kClassicalBound) + "\n";
  }
  return csv;
}

double parse_theta(const std::string& text) {
  std::string trimmed;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
  }
  if (trimmed.empty()) {
    throw std::invalid_argument("empty theta expression");
  }

  const auto parse_full_double = [](const std::string& s, double& out) {
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && !s.empty();
  };

  double plain = 0.0;
  if (parse_full_double(trimmed, plain)) {
    if (!std::isfinite(plain)) {
      throw std::invalid_argument("theta must be finite");
    }
    return plain;
  }

  const std::size_t pos = trimmed.find("pi");
  if (pos == std::string::npos) {
    throw std::invalid_argument("cannot parse theta expression '" + text + "'");
  }
  const std::string head = trimmed.substr(0, pos);
  const std::string tail = trimmed.substr(pos + 2);

  double coefficient = 1.0;
  if (head == "-") {
    coefficient = -1.0;
  } else if (!head.empty() && head != "+") {
    if (!parse_full_double(head, coefficient)) {
      throw std::invalid_argument("cannot parse theta expression '" + text + "'");
    }
  }

  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/' || !parse_full_double(tail.substr(1), divisor) ||
        divisor == 0.0) {
      throw std::invalid_argument("cannot parse theta expression '" + text + "'");
    }
  }
  const double value = coefficient * kPi / divisor;
  if (!std::isfinite(value)) {
    throw std::invalid_argument("theta must be finite");
  }
  return value;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

Json run_manifest(const std::string& subcommand, std::uint64_t config_hash,
                  std::uint64_t seed, const std::vector<std::string>& outputs) {
  Json paths = Json::array();
  for (const std::string& path : outputs) paths.push_back(path);
  return Json{{"subcommand", subcommand},
              {"config_hash", config_hash},
              {"seed", seed},
              {"tool_version", kToolVersion},
              {"timestamp", iso8601_utc_now()},
              {"outputs", paths}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) {
    throw std::runtime_error("failed while reading '" + path + "'");
  }
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  out.flush();
  if (!out.good()) {
    throw std::runtime_error("failed while writing '" + path + "'");
  }
}

}  // namespace pghz
