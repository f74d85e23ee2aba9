// Command-line front end: seeded, reproducible simulations and analyses of
// the four-photon phase-GHZ Bell experiment. One subcommand per artifact:
//   scan          S(theta) curve as CSV
//   expectations  the 16 correlation values at one phase
//   witness       decomposed entanglement witness at a supported phase
//   tomography    forward-modelled counts + MLE reconstruction + fidelity
//   lhv           brute-force classical bound with a maximizing strategy
//   bell-test     a single full S measurement
// Exit codes: 0 success, 1 invalid input, 2 I/O failure.
#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pghz/bell.hpp"
#include "pghz/experiment.hpp"
#include "pghz/random.hpp"
#include "pghz/serialize.hpp"
#include "pghz/state.hpp"
#include "pghz/tomography.hpp"

namespace {

constexpr int kExitSuccess = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitIoFailure = 2;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> theta;
  std::string out_path;
};

pghz::ExperimentConfig load_config(const CommonOptions& options) {
  const std::string text = pghz::read_text_file(options.config_path);
  pghz::Json document;
  try {
    document = pghz::Json::parse(text);
  } catch (const pghz::Json::exception& e) {
    throw std::invalid_argument("config is not valid JSON: " + std::string(e.what()));
  }
  pghz::ExperimentConfig config = pghz::config_from_json(document);
  if (options.seed.has_value()) config.seed = *options.seed;
  if (options.theta.has_value()) config.theta = pghz::parse_theta(*options.theta);
  pghz::validate_config(config);
  return config;
}

void write_with_manifest(const std::string& subcommand,
                         const pghz::ExperimentConfig& config,
                         const std::string& out_path, const std::string& payload) {
  pghz::write_text_file(out_path, payload);
  const std::uint64_t hash =
      pghz::fnv1a64(pghz::config_to_json(config).dump());
  const pghz::Json manifest =
      pghz::run_manifest(subcommand, hash, config.seed, {out_path});
  pghz::write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

int run_scan(const CommonOptions& options, const std::string& theta_min,
             const std::string& theta_max, int steps) {
  if (steps < 2) {
    throw std::invalid_argument("scan requires at least 2 steps");
  }
  const pghz::ExperimentConfig config = load_config(options);
  const double lo = pghz::parse_theta(theta_min);
  const double hi = pghz::parse_theta(theta_max);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                            static_cast<double>(steps - 1));
  }
  const std::vector<pghz::ScanPoint> points = pghz::theta_scan(config, grid);
  write_with_manifest("scan", config, options.out_path, pghz::scan_to_csv(points));
  return kExitSuccess;
}

int run_expectations(const CommonOptions& options) {
  const pghz::ExperimentConfig config = load_config(options);
  const pghz::BellRunResult result = pghz::run_bell_experiment(config);
  const pghz::Json payload = pghz::expectations_to_json(config.theta, result);
  write_with_manifest("expectations", config, options.out_path,
                      payload.dump(2) + "\n");
  return kExitSuccess;
}

int run_witness(const CommonOptions& options) {
  const pghz::ExperimentConfig config = load_config(options);
  const pghz::WitnessRunResult result = pghz::run_witness_experiment(config);
  const pghz::Json payload = pghz::witness_result_to_json(result.estimate);
  write_with_manifest("witness", config, options.out_path, payload.dump(2) + "\n");
  return kExitSuccess;
}

int run_tomography(const CommonOptions& options, double shots, int bootstrap,
                   const std::string& data_path) {
  const pghz::ExperimentConfig config = load_config(options);
  pghz::TomographySet set;
  if (!data_path.empty()) {
    const std::string text = pghz::read_text_file(data_path);
    pghz::Json document;
    try {
      document = pghz::Json::parse(text);
    } catch (const pghz::Json::exception& e) {
      throw std::invalid_argument("tomography data is not valid JSON: " +
                                  std::string(e.what()));
    }
    set = pghz::tomography_set_from_json(document);
  } else {
    const pghz::DensityMatrix rho = pghz::apply_noise(
        pghz::pure_to_density(pghz::phase_ghz(4, config.theta)), config.noise);
    set = pghz::simulate_tomography_counts(rho, shots, config.seed);
  }
  const pghz::StateVector target = pghz::phase_ghz(4, config.theta);
  const pghz::MleResult fit = pghz::mle_reconstruct(set);
  const std::uint64_t bootstrap_seed =
      pghz::RandomStream(config.seed).substream(1).seed();
  const pghz::FidelityEstimate fidelity =
      pghz::fidelity_with_error(set, target, bootstrap, bootstrap_seed);
  const pghz::Json payload = pghz::tomography_result_to_json(fit, fidelity);
  write_with_manifest("tomography", config, options.out_path,
                      payload.dump(2) + "\n");
  return kExitSuccess;
}

int run_lhv(int num_parties, const std::string& out_path) {
  const pghz::LhvResult result = pghz::lhv_max(num_parties);
  const pghz::Json payload = pghz::lhv_result_to_json(result, num_parties);
  pghz::write_text_file(out_path, payload.dump(2) + "\n");
  const pghz::Json parameters{{"num_parties", num_parties}};
  const pghz::Json manifest = pghz::run_manifest(
      "lhv", pghz::fnv1a64(parameters.dump()), 0, {out_path});
  pghz::write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
  return kExitSuccess;
}

int run_bell_test(const CommonOptions& options) {
  const pghz::ExperimentConfig config = load_config(options);
  const pghz::BellRunResult result = pghz::run_bell_experiment(config);
  const pghz::Json payload = pghz::bell_result_to_json(config.theta, result);
  write_with_manifest("bell-test", config, options.out_path,
                      payload.dump(2) + "\n");
  return kExitSuccess;
}

void add_common(CLI::App* cmd, CommonOptions* options, bool config_required) {
  auto* config = cmd->add_option("--config", options->config_path,
                                 "Path to the experiment config JSON");
  if (config_required) config->required();
  cmd->add_option("--seed", options->seed, "Override the config seed");
  cmd->add_option("--theta", options->theta,
                  "Override theta (number or e.g. 'pi/4')");
  cmd->add_option("--out", options->out_path, "Output file path")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-photon phase-GHZ Bell experiment simulator"};
  app.require_subcommand(1);

  CommonOptions scan_options;
  std::string theta_min = "0";
  std::string theta_max = "pi";
  int steps = 65;
  CLI::App* scan = app.add_subcommand("scan", "S(theta) curve as CSV");
  add_common(scan, &scan_options, true);
  scan->add_option("--theta-min", theta_min, "Grid start (default 0)");
  scan->add_option("--theta-max", theta_max, "Grid end (default pi)");
  scan->add_option("--steps", steps, "Grid size, at least 2 (default 65)");

  CommonOptions expectation_options;
  CLI::App* expectations =
      app.add_subcommand("expectations", "All 16 correlation values at one phase");
  add_common(expectations, &expectation_options, true);

  CommonOptions witness_options;
  CLI::App* witness = app.add_subcommand(
      "witness", "Decomposed entanglement witness at theta in {0, pi/4, pi/2}");
  add_common(witness, &witness_options, true);

  CommonOptions tomography_options;
  double shots = 1e5;
  int bootstrap = 100;
  std::string data_path;
  CLI::App* tomography = app.add_subcommand(
      "tomography", "Simulate counts, reconstruct by MLE, report fidelity");
  add_common(tomography, &tomography_options, true);
  tomography->add_option("--shots", shots, "Shots per setting (default 1e5)");
  tomography->add_option("--bootstrap", bootstrap,
                         "Bootstrap resamples, at least 2 (default 100)");
  tomography->add_option("--data", data_path,
                         "Reconstruct from an existing tomography set JSON "
                         "instead of simulating");

  int num_parties = 4;
  std::string lhv_out;
  CLI::App* lhv = app.add_subcommand("lhv", "Exhaustive classical bound");
  lhv->add_option("--n", num_parties, "Number of parties, 1..6 (default 4)");
  lhv->add_option("--out", lhv_out, "Output file path")->required();

  CommonOptions bell_options;
  CLI::App* bell = app.add_subcommand("bell-test", "One full S measurement");
  add_common(bell, &bell_options, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitSuccess : kExitInvalidInput;
  }

  try {
    if (scan->parsed()) return run_scan(scan_options, theta_min, theta_max, steps);
    if (expectations->parsed()) return run_expectations(expectation_options);
    if (witness->parsed()) return run_witness(witness_options);
    if (tomography->parsed()) {
      return run_tomography(tomography_options, shots, bootstrap, data_path);
    }
    if (lhv->parsed()) return run_lhv(num_parties, lhv_out);
    if (bell->parsed()) return run_bell_test(bell_options);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const pghz::Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoFailure;
  }
  return kExitInvalidInput;
}
