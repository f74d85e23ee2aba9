#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "cli_util.hpp"
#include "pghz/serialize.hpp"
#include "pghz/state.hpp"
#include "pghz/tomography.hpp"
#include "schema_check.hpp"

using namespace pghz;
using namespace pghz::testing;

namespace {

namespace fs = std::filesystem;

const char* kCli = PGHZ_CLI_PATH;

const char* kExactConfig = R"({
  "theta": "pi/4",
  "noise": {"kind": "none", "parameter": 1.0},
  "fourfold_rate_hz": 1.64,
  "duration_s": 300.0,
  "seed": 11,
  "sampled": false
})";

const char* kSampledConfig = R"({
  "theta": "pi/4",
  "noise": {"kind": "dephasing", "parameter": 0.887},
  "fourfold_rate_hz": 1.64,
  "duration_s": 30.0,
  "seed": 2718281828,
  "sampled": true
})";

struct CsvRow {
  double theta = 0.0;
  double s = 0.0;
  double sigma_s = 0.0;
  double quantum = 0.0;
  double bound = 0.0;
};

std::vector<CsvRow> parse_scan_csv(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  std::vector<CsvRow> rows;
  bool header = true;
  while (std::getline(stream, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    CsvRow row;
    std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &row.theta, &row.s,
                &row.sigma_s, &row.quantum, &row.bound);
    rows.push_back(row);
  }
  return rows;
}

// Runs the CLI twice in sibling directories with the same relative output
// name and checks that data bytes and timestamp-stripped manifests agree.
void check_deterministic(const std::string& tag, const std::string& config,
                         const std::string& args, const std::string& out_name) {
  const fs::path dir_a = fresh_directory(tag + "_a");
  const fs::path dir_b = fresh_directory(tag + "_b");
  for (const fs::path& dir : {dir_a, dir_b}) {
    if (!config.empty()) spit(dir / "config.json", config);
    const std::string command = "cd " + dir.string() + " && " + kCli + " " +
                                args + " --out " + out_name + " > /dev/null 2>&1";
    REQUIRE(run_command(command) == 0);
  }
  const std::string payload_a = slurp(dir_a / out_name);
  CHECK(!payload_a.empty());
  CHECK(payload_a == slurp(dir_b / out_name));
  CHECK(without_timestamp(slurp(dir_a / (out_name + ".manifest.json"))) ==
        without_timestamp(slurp(dir_b / (out_name + ".manifest.json"))));
}

}  // namespace

TEST_CASE("scan produces the S(theta) curve") {
  const fs::path dir = fresh_directory("scan");
  spit(dir / "config.json", kExactConfig);
  const std::string command =
      "cd " + dir.string() + " && " + kCli +
      " scan --config config.json --theta-min 0 --theta-max pi --steps 65"
      " --out scan.csv";
  REQUIRE(run_command(command) == 0);

  const std::string csv = slurp(dir / "scan.csv");
  CHECK(csv.rfind("theta,S,sigma_S,quantum_prediction,classical_bound\n", 0) == 0);
  const std::vector<CsvRow> rows = parse_scan_csv(csv);
  REQUIRE(rows.size() == 65);

  std::size_t argmax = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].bound == 1.0);
    CHECK(std::abs(rows[i].s - rows[i].quantum) < 1e-9);
    if (rows[i].s > rows[argmax].s) argmax = i;
  }
  CHECK(rows[argmax].theta == doctest::Approx(kPi / 4.0).epsilon(1e-9));
  CHECK(rows[argmax].s == doctest::Approx(kQuantumMax).epsilon(1e-9));
  CHECK(rows.front().s == doctest::Approx(2.0).epsilon(1e-9));

  const Json manifest = Json::parse(slurp(dir / "scan.csv.manifest.json"));
  CHECK(schema_violation(load_schema("manifest.schema.json"), manifest) == "");
  CHECK(manifest.at("subcommand") == "scan");
  CHECK(manifest.at("seed").get<std::uint64_t>() == 11);
}

TEST_CASE("expectations report the per-setting correlations") {
  const fs::path dir = fresh_directory("expectations");
  spit(dir / "config.json", kExactConfig);
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " expectations --config config.json --out e.json") == 0);
  const Json doc = Json::parse(slurp(dir / "e.json"));
  CHECK(schema_violation(load_schema("expectations.schema.json"), doc) == "");
  REQUIRE(doc.at("entries").size() == 16);
  for (const Json& entry : doc.at("entries")) {
    CHECK(std::abs(std::abs(entry.at("e").get<double>()) - kInvSqrt2) < 1e-12);
  }

  // theta = 0 splits the settings into 8 full-visibility and 8 vanishing.
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " expectations --config config.json --theta 0"
                      " --out e0.json") == 0);
  const Json doc0 = Json::parse(slurp(dir / "e0.json"));
  int full = 0;
  int zero = 0;
  for (const Json& entry : doc0.at("entries")) {
    const double e = entry.at("e").get<double>();
    if (std::abs(std::abs(e) - 1.0) < 1e-12) ++full;
    if (std::abs(e) < 1e-12) ++zero;
    int circular = 0;
    for (const Json& basis : entry.at("setting")) {
      if (basis.get<std::string>() == "RL") ++circular;
    }
    if (circular % 2 == 0) {
      CHECK(std::abs(std::abs(e) - 1.0) < 1e-12);
    } else {
      CHECK(std::abs(e) < 1e-12);
    }
  }
  CHECK(full == 8);
  CHECK(zero == 8);
}

TEST_CASE("witness subcommand") {
  const fs::path dir = fresh_directory("witness");
  spit(dir / "config.json", kExactConfig);
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " witness --config config.json --out w.json") == 0);
  const Json doc = Json::parse(slurp(dir / "w.json"));
  CHECK(schema_violation(load_schema("witness_result.schema.json"), doc) == "");
  CHECK(doc.at("witness").get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(doc.at("method") == "decomposed");
  CHECK(doc.at("significance_sd").is_null());  // exact mode: sigma = 0

  // Unsupported phases are invalid input and say which phases work.
  const int code = run_command("cd " + dir.string() + " && " + kCli +
                               " witness --config config.json --theta 0.3"
                               " --out bad.json 2> stderr.txt");
  CHECK(code == 1);
  const std::string stderr_text = slurp(dir / "stderr.txt");
  CHECK(stderr_text.find("pi/4") != std::string::npos);
}

TEST_CASE("tomography subcommand reconstructs the state") {
  const fs::path dir = fresh_directory("tomography");
  spit(dir / "config.json", kSampledConfig);
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " tomography --config config.json --shots 3000"
                      " --bootstrap 3 --out t.json") == 0);
  const Json doc = Json::parse(slurp(dir / "t.json"));
  CHECK(schema_violation(load_schema("tomography_result.schema.json"), doc) == "");
  // Dephasing V = 0.887 pins the target-state fidelity near (1 + V)/2.
  CHECK(doc.at("F").get<double>() > 0.90);
  CHECK(doc.at("F").get<double>() < 0.97);
  CHECK(doc.at("sigma_F").get<double>() > 0.0);

  // Reconstruction from a pre-recorded data set instead of simulation.
  const TomographySet set = simulate_tomography_counts(
      pure_to_density(phase_ghz(4, kPi / 4.0)), 2000.0, 99);
  spit(dir / "data.json", tomography_set_to_json(set).dump());
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " tomography --config config.json --data data.json"
                      " --bootstrap 2 --out from_data.json") == 0);
  const Json doc2 = Json::parse(slurp(dir / "from_data.json"));
  CHECK(doc2.at("F").get<double>() > 0.96);
}

TEST_CASE("tomography subcommand is near-exact on a noiseless state") {
  const fs::path dir = fresh_directory("tomography_clean");
  spit(dir / "config.json", R"({
    "theta": "0",
    "noise": {"kind": "none", "parameter": 1.0},
    "fourfold_rate_hz": 1.64,
    "duration_s": 300.0,
    "seed": 31415,
    "sampled": true
  })");
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " tomography --config config.json --shots 100000"
                      " --bootstrap 2 --out clean.json") == 0);
  const Json doc = Json::parse(slurp(dir / "clean.json"));
  CHECK(doc.at("F").get<double>() >= 0.999);
}

TEST_CASE("lhv subcommand certifies the classical bound") {
  const fs::path dir = fresh_directory("lhv");
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " lhv --n 4 --out lhv.json") == 0);
  const Json doc = Json::parse(slurp(dir / "lhv.json"));
  CHECK(schema_violation(load_schema("lhv_result.schema.json"), doc) == "");
  CHECK(doc.at("bound").get<double>() == 1.0);
  CHECK(doc.at("num_parties").get<int>() == 4);
  CHECK(doc.at("strategy").size() == 4);

  CHECK(run_command("cd " + dir.string() + " && " + kCli +
                    " lhv --n 9 --out bad.json 2> /dev/null") == 1);
}

TEST_CASE("bell-test subcommand emits the S measurement") {
  const fs::path dir = fresh_directory("bell");
  spit(dir / "config.json", kExactConfig);
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " bell-test --config config.json --out s.json") == 0);
  const Json doc = Json::parse(slurp(dir / "s.json"));
  CHECK(schema_violation(load_schema("bell_result.schema.json"), doc) == "");
  CHECK(doc.at("S").get<double>() == doctest::Approx(kQuantumMax).epsilon(1e-12));
  CHECK(doc.at("sigma_S").get<double>() == 0.0);
  CHECK(doc.at("classical_bound").get<double>() == 1.0);

  // Seed overrides show up in the manifest.
  REQUIRE(run_command("cd " + dir.string() + " && " + kCli +
                      " bell-test --config config.json --seed 99"
                      " --out s2.json") == 0);
  const Json manifest = Json::parse(slurp(dir / "s2.json.manifest.json"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 99);
}

TEST_CASE("exit codes distinguish invalid input from IO failure") {
  const fs::path dir = fresh_directory("exit_codes");
  spit(dir / "config.json", kExactConfig);
  spit(dir / "broken.json", "{not json");
  const std::string base = "cd " + dir.string() + " && " + kCli;

  CHECK(run_command(base + " scan --config missing.json --out o.csv"
                           " 2> /dev/null") == 2);
  CHECK(run_command(base + " scan --config broken.json --out o.csv"
                           " 2> /dev/null") == 1);
  CHECK(run_command(base + " scan --config config.json --steps 1 --out o.csv"
                           " 2> /dev/null") == 1);
  CHECK(run_command(base + " bell-test --config config.json"
                           " --out /nonexistent-dir-xyz/o.json 2> /dev/null") == 2);
  CHECK(run_command(base + " frobnicate 2> /dev/null") == 1);
  CHECK(run_command(base + " 2> /dev/null") == 1);
  CHECK(run_command(base + " --help > /dev/null") == 0);
  CHECK(run_command(base + " bell-test --config config.json --theta bogus"
                           " --out o.json 2> /dev/null") == 1);
  CHECK(run_command(base + " tomography --config config.json --shots -5"
                           " --out o.json 2> /dev/null") == 1);
  CHECK(run_command(base + " tomography --config config.json --bootstrap 1"
                           " --shots 200 --out o.json 2> /dev/null") == 1);
}

TEST_CASE("identical config and seed reproduce identical bytes") {
  check_deterministic("det_scan", kSampledConfig,
                      "scan --config config.json --steps 9", "scan.csv");
  check_deterministic("det_expectations", kSampledConfig,
                      "expectations --config config.json", "e.json");
  check_deterministic("det_witness", kSampledConfig,
                      "witness --config config.json", "w.json");
  check_deterministic("det_bell", kSampledConfig,
                      "bell-test --config config.json", "s.json");
  check_deterministic("det_tomography", kSampledConfig,
                      "tomography --config config.json --shots 400 --bootstrap 2",
                      "t.json");
  check_deterministic("det_lhv", "", "lhv --n 3", "lhv.json");
}
