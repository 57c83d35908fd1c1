#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qflq/config.hpp"
#include "qflq/run.hpp"

using namespace qflq;
namespace fs = std::filesystem;

namespace {

const fs::path kSourceDir = QFLQ_SOURCE_DIR;

fs::path fresh_workdir(const std::string& name) {
  const fs::path dir = fs::path(QFLQ_BINARY_DIR) / "test_tmp" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Rows of a CSV of doubles, header skipped.
std::vector<std::vector<double>> csv_rows(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* kMinimalConstant = R"({
  "task": "effective-hamiltonian",
  "system": {
    "dim": 2,
    "omega": [1.0],
    "terms": [
      {"n": [0], "matrix": [[[0.25, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.25, 0.0]]]}
    ]
  },
  "order": 3,
  "output": "hq.json"
})";

std::string resonant_config() {
  return R"({
    "task": "effective-hamiltonian",
    "system": {
      "dim": 2,
      "omega": [1.0, 1.0],
      "terms": [
        {"n": [1, -1], "matrix": [[[0.0, 0.0], [0.1, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]},
        {"n": [-1, 1], "matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.1, 0.0], [0.0, 0.0]]]}
      ]
    },
    "order": 2,
    "output": "resonant.json"
  })";
}

}  // namespace

TEST_CASE("parse_config: minimal constant-Hamiltonian config") {
  const RunConfig config = parse_config(kMinimalConstant);
  CHECK(config.task == Task::effective_hamiltonian);
  REQUIRE(config.system.has_value());
  CHECK(config.system->dim() == 2);
  CHECK(config.system->dims() == 1);
  CHECK(config.system->terms().size() == 1);
  CHECK(config.order == 3);
  CHECK(config.output == "hq.json");
}

TEST_CASE("parse_config: shipped two-tone config matches its caption parameters") {
  const RunConfig config = load_config_file(kSourceDir / "configs" / "two_tone_weak.json");
  CHECK(config.task == Task::lambda_demo);
  REQUIRE(config.drive.has_value());
  CHECK(config.drive->omega.dims() == 2);
  CHECK(config.drive->omega[0] == 1.0);
  CHECK(config.drive->omega[1] == std::numbers::sqrt2);
  REQUIRE(config.drive->coeffs.size() == 2);
  CHECK(config.drive->coeffs.at(MultiIndex{1, 0}) == Complex(0.05, 0.0));
  CHECK(config.drive->coeffs.at(MultiIndex{0, 1}) == Complex(0.05, 0.0));
  REQUIRE(config.grid.has_value());
  CHECK(config.grid->t1 == 1200.0);
}

TEST_CASE("parse_config: schema violations carry the key path") {
  auto message_of = [](const std::string& text) {
    try {
      (void)parse_config(text);
      return std::string("(accepted)");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
  };

  // Non-Hermitian pairing.
  const std::string unpaired = R"({
    "task": "effective-hamiltonian",
    "system": {"dim": 2, "omega": [1.0],
      "terms": [{"n": [1], "matrix": [[[0.0,0.0],[0.5,0.0]],[[0.0,0.0],[0.0,0.0]]]}]},
    "order": 2, "output": "x.json"
  })";
  CHECK(message_of(unpaired).find("/system/terms") != std::string::npos);
  CHECK(message_of(unpaired).find("Hermitian") != std::string::npos);

  const std::string unknown = R"({"task": "lambda-demo", "drive": {"omega": [1.0],
    "coeffs": [{"n": [1], "f": [0.1, 0.0]}]},
    "grid": {"t0": 0.0, "t1": 1.0, "steps": 10}, "surprise": 1, "output": "x.csv"})";
  CHECK(message_of(unknown).find("/surprise") != std::string::npos);

  const std::string wrong_shape = R"({"task": "effective-hamiltonian",
    "system": {"dim": 2, "omega": [1.0], "terms": [{"n": [0], "matrix": [[[1.0,0.0]]]}]},
    "order": 2, "output": "x.json"})";
  CHECK(message_of(wrong_shape).find("/system/terms[0]/matrix") != std::string::npos);

  const std::string static_drive = R"({"task": "lambda-demo", "drive": {"omega": [1.0],
    "coeffs": [{"n": [0], "f": [0.1, 0.0]}]},
    "grid": {"t0": 0.0, "t1": 1.0, "steps": 10}, "output": "x.csv"})";
  CHECK(message_of(static_drive).find("f_0") != std::string::npos);

  CHECK_THROWS_AS((void)parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS((void)parse_config(R"({"task": "unknown-task"})"), ConfigError);
}

TEST_CASE("run: constant Hamiltonian has exactly vanishing higher orders") {
  const fs::path dir = fresh_workdir("const_hq");
  RunConfig config = parse_config(kMinimalConstant);
  config.output = (dir / "hq.json").string();
  run(config);

  const nlohmann::json out = nlohmann::json::parse(slurp(dir / "hq.json"));
  CHECK(out.at("order") == 3);
  REQUIRE(out.at("orders").size() == 3);
  CHECK(out.at("orders")[0].at("hq_frobenius_norm").get<double>() ==
        doctest::Approx(0.25 * std::numbers::sqrt2).epsilon(1e-15));
  CHECK(out.at("orders")[1].at("hq_frobenius_norm").get<double>() == 0.0);
  CHECK(out.at("orders")[2].at("hq_frobenius_norm").get<double>() == 0.0);
}

TEST_CASE("run: two-tone demo emits the closed-form effective column") {
  const fs::path dir = fresh_workdir("two_tone_run");
  RunConfig config = load_config_file(kSourceDir / "configs" / "two_tone.json");
  config.output = (dir / "two_tone.csv").string();
  run(config);

  const double rate = 0.01 + 0.01 / std::numbers::sqrt2;
  const auto rows = csv_rows(dir / "two_tone.csv");
  REQUIRE(rows.size() == 281);
  for (const auto& row : rows) {
    const double s = std::sin(rate * row[0]);
    CHECK(std::abs(row[2] - s * s) < 1e-12);
  }
}

TEST_CASE("run: evolve task reports elements and unitarity residual") {
  const fs::path dir = fresh_workdir("evolve_run");
  const std::string config_text = R"({
    "task": "evolve",
    "system": {"dim": 2, "omega": [1.0],
      "terms": [
        {"n": [0], "matrix": [[[0.1,0.0],[0.0,0.0]],[[0.0,0.0],[-0.1,0.0]]]},
        {"n": [1], "matrix": [[[0.0,0.0],[0.05,0.0]],[[0.05,0.0],[0.0,0.0]]]},
        {"n": [-1], "matrix": [[[0.0,0.0],[0.05,0.0]],[[0.05,0.0],[0.0,0.0]]]}
      ]},
    "grid": {"t0": 0.0, "t1": 50.0, "steps": 4000},
    "elements": [[0, 0], [0, 1]],
    "output_stride": 40,
    "output": "evolve.csv"
  })";
  RunConfig config = parse_config(config_text);
  config.output = (dir / "evolve.csv").string();
  run(config);

  std::ifstream in(dir / "evolve.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,re_U_0_0,im_U_0_0,re_U_0_1,im_U_0_1,unitarity_residual");
  const auto rows = csv_rows(dir / "evolve.csv");
  REQUIRE(rows.size() == 101);
  for (const auto& row : rows) {
    CHECK(row.back() <= 1e-10);
    CHECK(row[1] * row[1] + row[2] * row[2] <= 1.0 + 1e-12);
  }
}

TEST_CASE("run: sambe-compare writes the error curve and the quasienergy list") {
  const fs::path dir = fresh_workdir("sambe_run");
  const std::string config_text = R"({
    "task": "sambe-compare",
    "system": {"dim": 2, "omega": [1.0],
      "terms": [
        {"n": [0], "matrix": [[[0.1,0.0],[0.0,0.0]],[[0.0,0.0],[-0.1,0.0]]]},
        {"n": [1], "matrix": [[[0.0,0.0],[0.05,0.0]],[[0.05,0.0],[0.0,0.0]]]},
        {"n": [-1], "matrix": [[[0.0,0.0],[0.05,0.0]],[[0.05,0.0],[0.0,0.0]]]}
      ]},
    "cutoff": 8,
    "grid": {"t0": 0.0, "t1": 20.0, "steps": 2000},
    "output_stride": 100,
    "output": "sambe.csv"
  })";
  RunConfig config = parse_config(config_text);
  config.output = (dir / "sambe.csv").string();
  const auto files = run(config);
  REQUIRE(files.size() == 2);

  const auto rows = csv_rows(dir / "sambe.csv");
  REQUIRE(rows.size() == 21);
  for (const auto& row : rows) CHECK(row[1] < 1e-6);

  const nlohmann::json qe = nlohmann::json::parse(slurp(dir / "sambe.quasienergies.json"));
  const auto evs = qe.at("quasienergies").get<std::vector<double>>();
  CHECK(evs.size() == 34);
  CHECK(std::is_sorted(evs.begin(), evs.end()));
}

TEST_CASE("cli_main: exit codes for config, resonance and accuracy failures") {
  const fs::path dir = fresh_workdir("exit_codes");

  spit(dir / "resonant.json", resonant_config());
  CHECK(cli_main({"effective-hamiltonian", "--config", (dir / "resonant.json").string(), "--out",
                  (dir / "r.json").string()}) == 3);

  spit(dir / "bad.json", R"({"task": "lambda-demo", "nope": 1})");
  CHECK(cli_main({"lambda-demo", "--config", (dir / "bad.json").string()}) == 2);

  // Far too coarse for the self-check.
  spit(dir / "coarse.json", R"({
    "task": "evolve",
    "system": {"dim": 2, "omega": [1.0],
      "terms": [
        {"n": [1], "matrix": [[[0.0,0.0],[0.5,0.0]],[[0.5,0.0],[0.0,0.0]]]},
        {"n": [-1], "matrix": [[[0.0,0.0],[0.5,0.0]],[[0.5,0.0],[0.0,0.0]]]}
      ]},
    "grid": {"t0": 0.0, "t1": 200.0, "steps": 40},
    "output": "x.csv"})");
  CHECK(cli_main({"evolve", "--config", (dir / "coarse.json").string(), "--out",
                  (dir / "x.csv").string()}) == 4);

  // Task mismatch between subcommand and config.
  CHECK(cli_main({"evolve", "--config", (kSourceDir / "configs" / "two_tone_weak.json").string()}) == 2);

  // Override that does not apply to the task.
  CHECK(cli_main({"lambda-demo", "--config", (kSourceDir / "configs" / "single_tone.json").string(),
                  "--out", (dir / "y.csv").string(), "--order", "3"}) == 2);

  CHECK(cli_main({"lambda-demo", "--config", (kSourceDir / "configs" / "single_tone.json").string(),
                  "--out", (dir / "ok.csv").string()}) == 0);
  CHECK(fs::exists(dir / "ok.csv"));
}

TEST_CASE("run: byte-identical output for identical configs") {
  const fs::path dir = fresh_workdir("repro");
  for (const char* name : {"first", "second"}) {
    RunConfig config = load_config_file(kSourceDir / "configs" / "single_tone.json");
    config.output = (dir / (std::string(name) + ".csv")).string();
    run(config);
  }
  CHECK(slurp(dir / "first.csv") == slurp(dir / "second.csv"));
}

TEST_CASE("golden files regenerate byte-identically") {
  const fs::path dir = fresh_workdir("golden");
  const struct {
    const char* config;
    const char* golden;
  } cases[] = {{"single_tone.json", "single_tone.csv"},
               {"two_tone.json", "two_tone.csv"},
               {"two_tone_weak.json", "two_tone_weak.csv"},
               {"two_tone_weak_hq.json", "two_tone_weak_hq.json"}};
  for (const auto& c : cases) {
    RunConfig config = load_config_file(kSourceDir / "configs" / c.config);
    config.output = (dir / c.golden).string();
    run(config);
    CHECK_MESSAGE(slurp(dir / c.golden) == slurp(kSourceDir / "tests" / "golden" / c.golden),
                  c.golden);
  }
}

TEST_CASE("cli_main: sweep runs every config and keys outputs by content hash") {
  const fs::path dir = fresh_workdir("sweep");
  for (double t1 : {5.0, 7.0}) {
    std::ostringstream cfg;
    cfg << R"({"task": "lambda-demo", "drive": {"omega": [1.0, 1.4142135623730951],)"
        << R"("coeffs": [{"n": [1, 0], "f": [0.05, 0.0]}, {"n": [0, 1], "f": [0.05, 0.0]}]},)"
        << R"("grid": {"t0": 0.0, "t1": )" << t1 << R"(, "steps": 800}, "output": "unused.csv"})";
    spit(dir / ("run" + std::to_string(static_cast<int>(t1)) + ".json"), cfg.str());
  }
  setenv("QFLQ_THREADS", "2", 1);
  CHECK(cli_main({"lambda-demo", "--sweep", dir.string()}) == 0);
  unsetenv("QFLQ_THREADS");

  int produced = 0;
  for (const auto& entry : fs::directory_iterator(dir / "out"))
    if (entry.path().extension() == ".csv") ++produced;
  CHECK(produced == 2);

  // A config of the wrong task inside the directory fails the sweep.
  spit(dir / "intruder.json", resonant_config());
  CHECK(cli_main({"lambda-demo", "--sweep", dir.string()}) == 2);
}
