// JSON/CSV serialization for every file the command-line tool reads or
// writes, plus small I/O helpers. All encodings round-trip bit-exactly:
// doubles are emitted in shortest round-trip form and re-parse to the same
// value, so re-running with the same inputs reproduces identical bytes.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pghz/bell.hpp"
#include "pghz/experiment.hpp"
#include "pghz/measurement.hpp"
#include "pghz/tomography.hpp"
#include "pghz/witness.hpp"

namespace pghz {

inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::json;

// "HV" | "DA" | "RL"
std::string basis_name(PolarizationBasis basis);
PolarizationBasis basis_from_name(const std::string& name);

std::string noise_kind_name(NoiseKind kind);
NoiseKind noise_kind_from_name(const std::string& name);

// { setting: ["DA","RL",...], counts: [... 2^n ints], duration_s, seed,
//   rate_hz }. The setting entries also accept integers 1 and 2 on input.
Json counts_record_to_json(const CountsRecord& record);
CountsRecord counts_record_from_json(const Json& j);

// { theta, S, sigma_S, per_setting_E, per_setting_sigma, classical_bound,
//   quantum_max }
Json bell_result_to_json(double theta, const BellRunResult& result);

// { theta, witness, sigma, significance_sd, method }; non-finite
// significances serialize as null.
Json witness_result_to_json(const WitnessEstimate& estimate);

// Array of { labels: ["H","V","D","R" x4], counts, duration_s }. Input also
// accepts labels given as one 4-character string.
Json tomography_set_to_json(const TomographySet& set);
TomographySet tomography_set_from_json(const Json& j);

// { rho_re, rho_im (16x16 row arrays), F, sigma_F, log_likelihood,
//   iterations }
Json tomography_result_to_json(const MleResult& fit, const FidelityEstimate& fidelity);

Json lhv_result_to_json(const LhvResult& result, int num_parties);

// Per-setting expectation values with errors and the ideal +-cos/+-sin
// references, for the sixteen sigma_x/sigma_y settings.
Json expectations_to_json(double theta, const BellRunResult& result);

// Config document; `seed` is required (runs never draw wall-clock entropy),
// `theta` accepts a number or a string like "pi/4". Unknown keys are
// rejected.
Json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);

// Header theta,S,sigma_S,quantum_prediction,classical_bound.
std::string scan_to_csv(const std::vector<ScanPoint>& points);

// "0.785398", "pi/4", "-pi", "3pi/4", "0.5pi" all parse; anything else throws.
double parse_theta(const std::string& text);

std::uint64_t fnv1a64(std::string_view data);

std::string iso8601_utc_now();

// { subcommand, config_hash, seed, tool_version, timestamp, outputs }.
// Everything except the timestamp is deterministic.
Json run_manifest(const std::string& subcommand, std::uint64_t config_hash,
                  std::uint64_t seed, const std::vector<std::string>& outputs);

// Throw std::runtime_error on failure; write is atomic enough for our use
// (single writer, full buffer).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace pghz
