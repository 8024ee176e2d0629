#include "dyadlab/cli.hpp"
#include "dyadlab/serialization.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dyadlab;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = DYADLAB_CONFIG_DIR;

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dyadlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dyadlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

}  // namespace

TEST_CASE("config round trip") {
  for (const char* name : {"trivial.yaml", "ap_instance.yaml", "geometric_tail.yaml", "ap_instance.json"}) {
    const ExperimentConfig c = load_config(kConfigs / name);
    const nlohmann::json j = to_json(c);
    CHECK(config_from_json(j, c.base_dir) == c);
    CHECK(to_json(config_from_json(j, c.base_dir)) == j);
    // The JSON encoding of a config is itself a loadable config.
    const fs::path dir = scratch("roundtrip");
    CHECK(load_config(write(dir, "c.json", j.dump(2))) == config_from_json(j, dir));
  }
  const ExperimentConfig g = load_config(kConfigs / "geometric_tail.yaml");
  REQUIRE(g.generator);
  CHECK(g.generator->seed == 5);
  CHECK(g.exponents.has_tail());
  CHECK(g.bench_depths == std::vector<int>{4, 5, 6, 7});
}

TEST_CASE("config errors") {
  const fs::path dir = scratch("errors");
  CHECK_THROWS_WITH_AS(load_config(kConfigs / "bad_exponent.yaml"), doctest::Contains("exponent must exceed 1"),
                       ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.yaml"), ConfigError);
  CHECK_THROWS_WITH_AS(load_config(write(dir, "a.yaml", "model: {n: 1, K: 1}\nexponents: {head: ['2']}\ncolour: red\n")),
                       doctest::Contains("colour"), ConfigError);
  CHECK_THROWS_AS(load_config(write(dir, "b.yaml", "model: {n: 1, K: 1}\nexponents: {head: ['2']}\nsuites: [nope]\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_config(write(dir, "c.yaml", "model: {n: 1, K: 1}\nexponents: {head: ['2']}\nmode: fuzzy\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_config(write(dir, "d.yaml", "model: {n: 1, K: [1\n")), ConfigError);

  // Referenced leaf files must exist; they resolve relative to the config.
  const ExperimentConfig missing = load_config(
      write(dir, "e.yaml", "model: {n: 1, K: 1}\nexponents: {head: ['2']}\nweights: {v: {file: v.txt}}\n"));
  CHECK_THROWS_WITH_AS(build_instance(missing), doctest::Contains("does not exist"), ConfigError);
  write(dir, "v.txt", "1 3\n");
  CHECK(build_instance(missing).weights.v()[1] == 3.0);
  write(dir, "v.txt", "[1, 2, 3]");
  CHECK_THROWS_AS(build_instance(missing), ConfigError);
}

TEST_CASE("instances") {
  const Instance ap = build_instance(load_config(kConfigs / "ap_instance.yaml"));
  REQUIRE(ap.exact_weights);
  CHECK(ap.exact_weights->sigmas()[0][1] == Rational(1, 4));
  REQUIRE(ap.carleson);
  CHECK(ap.carleson->at(ap.model, CubeId{1, {0}}) == 0.5);

  // Generated weights are recorded by seed and reproducible; exact generation stays rational.
  ExperimentConfig c = load_config(kConfigs / "geometric_tail.yaml");
  const Instance a = build_instance(c), b = build_instance(c);
  CHECK(a.weights.v() == b.weights.v());
  c.generator->seed = 6;
  CHECK(build_instance(c).weights.v() != a.weights.v());
  c.mode = "exact";
  const Instance e = build_instance(c);
  REQUIRE(e.exact_weights);
  CHECK(to_double(e.exact_weights->sigmas()[0]) == e.weights.sigmas()[0]);
}

TEST_CASE("constants subcommand") {
  const fs::path out = scratch("constants");
  const Run r = run({"constants", "--config", (kConfigs / "ap_instance.yaml").string(), "--out", out.string()});
  CHECK(r.status == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(out / "constants.json"));
  CHECK(doc["schema"] == 1);
  CHECK(doc.contains("generated_at"));
  const auto& ap = doc["data"]["reports"][0];
  CHECK(ap["name"] == "ap_product");
  CHECK(ap["attaining_cube"] == "0:0");
  CHECK(std::abs(ap["value"].get<double>() - 1.1858541225631423) <= 1e-9);
  CHECK(r.out.find("1.18585412256") != std::string::npos);

  const fs::path t = scratch("constants_trivial");
  CHECK(run({"constants", "--config", (kConfigs / "trivial.yaml").string(), "--out", t.string()}).status == kExitOk);
  for (const auto& rep : nlohmann::json::parse(slurp(t / "constants.json"))["data"]["reports"]) {
    CHECK(rep["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("verify subcommand") {
  const fs::path out = scratch("verify");
  const Run r = run({"verify", "--config", (kConfigs / "trivial.yaml").string(), "--out", out.string(), "--threads", "4"});
  CHECK(r.status == kExitOk);
  const std::string csv = slurp(out / "verify.csv");
  CHECK(csv.rfind("suite,check,lhs,rhs,margin,pass\n", 0) == 0);
  CHECK(fs::exists(out / "witness_theorem_ap.json"));
  CHECK(fs::exists(out / "verify.txt"));
  const auto doc = nlohmann::json::parse(slurp(out / "verify.json"));
  CHECK(doc["data"]["pass"] == true);
  CHECK(doc["data"]["config"]["seed"] == 11);
  std::size_t false_rows = 0;
  for (std::size_t pos = 0; (pos = csv.find(",false\n", pos)) != std::string::npos; ++pos) ++false_rows;
  std::size_t informative_misses = 0;
  for (const auto& rep : doc["data"]["reports"]) {
    for (const auto& c : rep["checks"]) {
      if (!c["pass"].get<bool>()) {
        CHECK(c["informative"].get<bool>());
        ++informative_misses;
      }
    }
  }
  CHECK(false_rows == informative_misses);
}

TEST_CASE("verify output is byte-identical across runs and thread counts") {
  const fs::path out = scratch("determinism");
  const std::string config = (kConfigs / "geometric_tail.yaml").string();
  REQUIRE(run({"verify", "--config", config, "--out", out.string(), "--threads", "1"}).status == kExitOk);
  const std::string first = stable_dump(nlohmann::json::parse(slurp(out / "verify.json")));
  const std::string csv = slurp(out / "verify.csv");
  REQUIRE(run({"verify", "--config", config, "--out", out.string(), "--threads", "8"}).status == kExitOk);
  CHECK(stable_dump(nlohmann::json::parse(slurp(out / "verify.json"))) == first);
  CHECK(slurp(out / "verify.csv") == csv);
}

TEST_CASE("verification failures name the check and the witness file") {
  const fs::path out = scratch("failure");
  ExperimentConfig c = load_config(kConfigs / "trivial.yaml");
  VerificationReport bad;
  bad.suite = "holder";
  bad.checks.push_back({"made-up inequality", "<=", 2.0, 1.0, -1.0, false, false, 1, 1});
  bad.checks.push_back({"informative one", "<=", 2.0, 1.0, -1.0, false, true, 1, 1});
  std::ostringstream text;
  CHECK(emit_verification(c, {bad}, out, text) == kExitVerificationFailed);
  const std::string s = text.str();
  CHECK(s.find("FAILED holder: made-up inequality") != std::string::npos);
  CHECK(s.find((out / "witness_holder.json").string()) != std::string::npos);
  CHECK(s.find("FAILED holder: informative one") == std::string::npos);
  CHECK(slurp(out / "verify.csv").find(",false") != std::string::npos);
}

TEST_CASE("search subcommand") {
  const fs::path out = scratch("search");
  const Run r = run({"search", "--config", (kConfigs / "ap_instance.yaml").string(), "--out", out.string()});
  CHECK(r.status == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(out / "search.json"));
  const auto& weak = doc["data"]["certificates"][0];
  CHECK(weak["operator"] == "weak");
  CHECK(weak["lower_bound"].get<double>() == doctest::Approx(1.1858541225631423).epsilon(1e-12));
  CHECK(weak["testing_cube"] == "0:0");
  CHECK(doc["data"]["certificates"][1]["operator"] == "strong");
}

TEST_CASE("bench subcommand") {
  const fs::path out = scratch("bench");
  const fs::path config = write(out, "bench.yaml",
                                "model: {n: 1, K: 2}\nexponents: {head: ['2', '2']}\nbench: {depths: [6, 8, 10]}\n"
                                "output: {formats: [json, text]}\n");
  const Run r = run({"bench", "--config", config.string(), "--out", out.string()});
  CHECK(r.status == kExitOk);
  const auto rows = nlohmann::json::parse(slurp(out / "bench.json"))["data"]["rows"];
  REQUIRE(rows.size() == 9);
  for (const auto& row : rows) {
    CHECK(row["ns_per_cube"].get<double>() > 0);
    CHECK(row.contains("cubes"));
  }
  CHECK(rows[3]["cube_ratio"].get<double>() == doctest::Approx(511.0 / 127.0));
  CHECK(rows[3].contains("linear"));
  CHECK(!fs::exists(out / "verify.csv"));
}

TEST_CASE("command-line errors") {
  const Run bad = run({"verify", "--config", (kConfigs / "bad_exponent.yaml").string()});
  CHECK(bad.status == kExitConfigError);
  CHECK(bad.err.find("exponent must exceed 1") != std::string::npos);
  CHECK(run({"verify"}).status == kExitConfigError);
  CHECK(run({"frobnicate", "--config", "x"}).status == kExitConfigError);
  CHECK(run({"verify", "--config", (kConfigs / "trivial.yaml").string(), "--mode", "fuzzy"}).status ==
        kExitConfigError);
  CHECK(run({"verify", "--config", "/nonexistent/config.yaml"}).status == kExitConfigError);
  CHECK(run({"--help"}).status == kExitOk);
}
