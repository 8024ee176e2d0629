#ifndef DYADLAB_CONFIG_HPP
#define DYADLAB_CONFIG_HPP

#include "dyadlab/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dyadlab {

/// Any problem with the experiment description itself.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One leaf function: inline values (kept as text so rationals stay exact)
/// or a file holding a JSON array or one value per line.
struct LeafSource {
  std::vector<std::string> values;
  std::string file;

  bool empty() const noexcept { return values.empty() && file.empty(); }
  friend bool operator==(const LeafSource&, const LeafSource&) = default;
};

struct WeightGenerator {
  std::uint64_t seed = 1;
  double spread = 2.0;
  friend bool operator==(const WeightGenerator&, const WeightGenerator&) = default;
};

struct ExperimentConfig {
  int dimension = 1;
  int depth = 2;
  ExponentSequence exponents;
  LeafSource v;                                // empty: generated, or 1 without a generator
  std::vector<LeafSource> omega;               // per head coordinate; empty entries as for v
  std::optional<WeightGenerator> generator;
  std::map<std::string, std::string> carleson;  // cube id -> a_B
  std::vector<std::string> suites;
  std::int64_t samples = 500;
  int lambda_grid = 32;
  double tolerance = 1e-9;
  std::string mode = "float";
  std::uint64_t seed = 7;
  SearchBudget search;
  SearchBudget verify_search{8, 20};
  std::vector<int> bench_depths;
  std::string output_dir = "out";
  std::vector<std::string> formats{"json", "csv", "text"};
  VConvention convention = VConvention::p_over_p;
  std::filesystem::path base_dir;  // relative file references resolve here

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

inline const std::vector<std::string> kAllSuites{"holder", "theorem_ap", "classical", "carleson", "sp",
                                                 "corollary_astar"};

/// YAML (any extension but .json) or JSON.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& config);
/// YAML document tree as JSON: integers, booleans and null keep their type,
/// every other scalar becomes a string.
nlohmann::json yaml_to_json(const std::string& text);

/// The model and weights a configuration describes.
struct Instance {
  DyadicModel model;
  WeightVector<double> weights;
  std::optional<WeightVector<Rational>> exact_weights;  // exact mode only
  std::optional<CarlesonFamily<double>> carleson;
};

Instance build_instance(const ExperimentConfig& config);

VerifyOptions verify_options(const ExperimentConfig& config, unsigned threads);

}  // namespace dyadlab

#endif  // DYADLAB_CONFIG_HPP
