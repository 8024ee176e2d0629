#include "dyadlab/config.hpp"

#include "dyadlab/serialization.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace dyadlab {

using nlohmann::json;

namespace {

json yaml_node_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(yaml_node_to_json(item));
      return out;
    }
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_node_to_json(kv.second);
      return out;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted
  std::int64_t i = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ec == std::errc() && end == s.data() + s.size()) return i;
  if (s == "true" || s == "True") return true;
  if (s == "false" || s == "False") return false;
  if (s == "null" || s == "~") return nullptr;
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double as_double(const json& j, const char* what) {
  try {
    return number_from_json(j);
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": expected a number, got " + j.dump());
  }
}

std::int64_t as_int(const json& j, const char* what) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  throw ConfigError(std::string(what) + ": expected an integer, got " + j.dump());
}

std::string as_string(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw ConfigError(std::string(what) + ": expected a string, got " + j.dump());
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a mapping");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

LeafSource leaf_source(const json& j, const char* what) {
  LeafSource out;
  if (j.is_null()) return out;
  if (j.is_array()) {
    for (const json& x : j) out.values.push_back(as_string(x, what));
    return out;
  }
  if (j.is_object() && j.contains("file")) {
    out.file = as_string(j.at("file"), what);
    return out;
  }
  throw ConfigError(std::string(what) + ": expected an array of values or {file: path}");
}

json to_json(const LeafSource& s) {
  if (!s.file.empty()) return {{"file", s.file}};
  if (s.values.empty()) return nullptr;
  return s.values;
}

json to_json(const SearchBudget& b) { return {{"restarts", b.restarts}, {"sweeps", b.sweeps}}; }

SearchBudget search_budget(const json& j, SearchBudget out, const char* where) {
  only_keys(j, {"restarts", "sweeps"}, where);
  if (j.contains("restarts")) out.restarts = static_cast<int>(as_int(j.at("restarts"), "restarts"));
  if (j.contains("sweeps")) out.sweeps = static_cast<int>(as_int(j.at("sweeps"), "sweeps"));
  if (out.restarts < 0 || out.sweeps < 0) throw ConfigError(std::string(where) + " must be nonnegative");
  return out;
}

}  // namespace

json yaml_to_json(const std::string& text) {
  try {
    return yaml_node_to_json(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed YAML: ") + e.what());
  }
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  only_keys(j,
            {"model", "exponents", "weights", "carleson", "suites", "samples", "lambda_grid", "tolerance", "mode",
             "seed", "search", "verify_search", "bench", "output", "corollary"},
            "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  if (!j.contains("model")) throw ConfigError("config: 'model' is required");
  const json& model = j.at("model");
  only_keys(model, {"n", "K"}, "model");
  c.dimension = static_cast<int>(as_int(model.value("n", json(1)), "model.n"));
  c.depth = static_cast<int>(as_int(model.value("K", json(2)), "model.K"));

  if (!j.contains("exponents")) throw ConfigError("config: 'exponents' is required");
  try {
    only_keys(j.at("exponents"), {"head", "tail"}, "exponents");
    if (j.at("exponents").contains("tail") && !j.at("exponents").at("tail").is_null()) {
      only_keys(j.at("exponents").at("tail"), {"kind", "scale", "base", "start"}, "exponents.tail");
    }
    c.exponents = exponents_from_json(j.at("exponents"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("exponents: ") + e.what());
  }

  if (j.contains("weights")) {
    const json& w = j.at("weights");
    only_keys(w, {"v", "omega", "generator"}, "weights");
    if (w.contains("v")) c.v = leaf_source(w.at("v"), "weights.v");
    if (w.contains("omega")) {
      if (!w.at("omega").is_array()) throw ConfigError("weights.omega must be a list with one entry per head exponent");
      for (const json& o : w.at("omega")) c.omega.push_back(leaf_source(o, "weights.omega"));
    }
    if (w.contains("generator") && !w.at("generator").is_null()) {
      const json& g = w.at("generator");
      only_keys(g, {"seed", "spread"}, "weights.generator");
      WeightGenerator gen;
      if (g.contains("seed")) gen.seed = static_cast<std::uint64_t>(as_int(g.at("seed"), "generator.seed"));
      if (g.contains("spread")) gen.spread = as_double(g.at("spread"), "generator.spread");
      c.generator = gen;
    }
  }
  if (!c.omega.empty() && c.omega.size() != c.exponents.head_size()) {
    throw ConfigError("weights.omega has " + std::to_string(c.omega.size()) + " entries but the exponent head has " +
                      std::to_string(c.exponents.head_size()));
  }
  if (j.contains("carleson") && !j.at("carleson").is_null()) {
    if (!j.at("carleson").is_object()) throw ConfigError("carleson must map cube ids to coefficients");
    for (const auto& [cube, value] : j.at("carleson").items()) c.carleson[cube] = as_string(value, "carleson");
  }
  if (j.contains("suites")) {
    for (const json& s : j.at("suites")) {
      const std::string name = as_string(s, "suites");
      if (std::find(kAllSuites.begin(), kAllSuites.end(), name) == kAllSuites.end()) {
        throw ConfigError("unknown suite '" + name + "'");
      }
      c.suites.push_back(name);
    }
  } else {
    c.suites = kAllSuites;
  }
  if (j.contains("samples")) c.samples = as_int(j.at("samples"), "samples");
  if (j.contains("lambda_grid")) c.lambda_grid = static_cast<int>(as_int(j.at("lambda_grid"), "lambda_grid"));
  if (j.contains("tolerance")) c.tolerance = as_double(j.at("tolerance"), "tolerance");
  if (j.contains("mode")) c.mode = as_string(j.at("mode"), "mode");
  if (c.mode != "float" && c.mode != "exact") throw ConfigError("mode must be float or exact");
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(as_int(j.at("seed"), "seed"));
  if (j.contains("search")) c.search = search_budget(j.at("search"), c.search, "search");
  if (j.contains("verify_search")) c.verify_search = search_budget(j.at("verify_search"), c.verify_search, "verify_search");
  if (j.contains("bench")) {
    only_keys(j.at("bench"), {"depths"}, "bench");
    for (const json& k : j.at("bench").value("depths", json::array())) {
      c.bench_depths.push_back(static_cast<int>(as_int(k, "bench.depths")));
    }
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, {"dir", "formats"}, "output");
    if (o.contains("dir")) c.output_dir = as_string(o.at("dir"), "output.dir");
    if (o.contains("formats")) {
      c.formats.clear();
      for (const json& f : o.at("formats")) {
        const std::string name = as_string(f, "output.formats");
        if (name != "json" && name != "csv" && name != "text") throw ConfigError("unknown output format '" + name + "'");
        c.formats.push_back(name);
      }
    }
  }
  if (j.contains("corollary")) {
    only_keys(j.at("corollary"), {"v_convention"}, "corollary");
    try {
      c.convention = parse_v_convention(as_string(j.at("corollary").value("v_convention", json("p_over_p")),
                                                  "corollary.v_convention"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.samples < 0) throw ConfigError("samples must be nonnegative");
  if (c.tolerance < 0) throw ConfigError("tolerance must be nonnegative");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json weights = json::object();
  weights["v"] = to_json(c.v);
  json omega = json::array();
  for (const auto& o : c.omega) omega.push_back(to_json(o));
  weights["omega"] = std::move(omega);
  if (c.generator) weights["generator"] = {{"seed", c.generator->seed}, {"spread", c.generator->spread}};
  json carleson = json::object();
  for (const auto& [cube, value] : c.carleson) carleson[cube] = value;
  return {{"model", {{"n", c.dimension}, {"K", c.depth}}},
          {"exponents", dyadlab::to_json(c.exponents)},
          {"weights", std::move(weights)},
          {"carleson", std::move(carleson)},
          {"suites", c.suites},
          {"samples", c.samples},
          {"lambda_grid", c.lambda_grid},
          {"tolerance", c.tolerance},
          {"mode", c.mode},
          {"seed", c.seed},
          {"search", to_json(c.search)},
          {"verify_search", to_json(c.verify_search)},
          {"bench", {{"depths", c.bench_depths}}},
          {"output", {{"dir", c.output_dir}, {"formats", c.formats}}},
          {"corollary", {{"v_convention", to_string(c.convention)}}}};
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.base_dir == b.base_dir && to_json(a) == to_json(b);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  if (path.extension() == ".json") {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
  } else {
    j = yaml_to_json(text);
  }
  try {
    return config_from_json(j, path.parent_path());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

namespace {

std::vector<std::string> source_values(const ExperimentConfig& c, const LeafSource& s) {
  if (s.file.empty()) return s.values;
  const std::filesystem::path path = std::filesystem::path(s.file).is_absolute() ? std::filesystem::path(s.file) : c.base_dir / s.file;
  if (!std::filesystem::exists(path)) throw ConfigError("referenced file does not exist: " + path.string());
  const std::string text = read_file(path);
  std::vector<std::string> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    for (const json& x : json::parse(text)) out.push_back(as_string(x, s.file.c_str()));
  } else {
    std::string token;
    for (char ch : text + "\n") {
      if (ch == ',' || ch == '\n' || ch == '\r' || ch == ' ' || ch == '\t') {
        if (!token.empty()) out.push_back(token);
        token.clear();
      } else {
        token += ch;
      }
    }
  }
  return out;
}

template <typename Scalar>
LeafFunction<Scalar> parse_leaf(const DyadicModel& model, const std::vector<std::string>& values, const char* what) {
  if (static_cast<std::int64_t>(values.size()) != model.leaf_count()) {
    throw ConfigError(std::string(what) + " has " + std::to_string(values.size()) + " values, model has " +
                      std::to_string(model.leaf_count()) + " leaves");
  }
  LeafFunction<Scalar> f(model.leaf_count());
  for (std::size_t x = 0; x < values.size(); ++x) {
    const Rational q = parse_rational(values[x]);
    if constexpr (is_exact_v<Scalar>) {
      f[static_cast<Eigen::Index>(x)] = q;
    } else {
      f[static_cast<Eigen::Index>(x)] = to_double(q);
    }
  }
  return f;
}

/// Generated exact weights: q^{-a} with p - 1 = a/b, so that the dual weight
/// q^b is rational; q ranges over {1/4, 2/4, ..., 16/4}.
LeafFunction<Rational> exact_generated(const DyadicModel& model, CounterRng& rng, const Rational* p) {
  LeafFunction<Rational> f(model.leaf_count());
  for (Eigen::Index x = 0; x < f.size(); ++x) {
    const Rational q(static_cast<long>(1 + rng.below(16)), 4L);
    if (!p) {
      f[x] = q;
    } else {
      const Rational e = *p - 1;
      f[x] = pow_int(q, -boost::multiprecision::numerator(e).convert_to<std::int64_t>());
    }
  }
  return f;
}

}  // namespace

Instance build_instance(const ExperimentConfig& c) {
  try {
    DyadicModel model(c.dimension, c.depth);
    const std::size_t n = c.exponents.head_size();
    const std::uint64_t wseed = c.generator ? derive_seed(c.generator->seed, tag_of("weights")) : 0;
    auto source = [&](std::size_t idx) -> const LeafSource* {
      if (idx == 0) return c.v.empty() ? nullptr : &c.v;
      if (c.omega.size() < idx || c.omega[idx - 1].empty()) return nullptr;
      return &c.omega[idx - 1];
    };
    std::optional<CarlesonFamily<double>> family;
    if (!c.carleson.empty()) {
      family.emplace(model);
      for (const auto& [cube_text, value] : c.carleson) {
        const CubeId cube = parse_cube_id(cube_text);
        model.check_cube(cube);
        family->set(model, cube, to_double(parse_rational(value)));
      }
    }
    if (c.mode == "exact") {
      std::vector<LeafFunction<Rational>> leaves;
      for (std::size_t idx = 0; idx <= n; ++idx) {
        const Rational* p = idx == 0 ? nullptr : &c.exponents.head()[idx - 1];
        if (const LeafSource* s = source(idx)) {
          leaves.push_back(parse_leaf<Rational>(model, source_values(c, *s), idx == 0 ? "weights.v" : "weights.omega"));
        } else if (c.generator) {
          CounterRng rng(wseed, idx);
          leaves.push_back(exact_generated(model, rng, p));
        } else {
          leaves.push_back(LeafFunction<Rational>::Ones(model.leaf_count()));
        }
      }
      LeafFunction<Rational> v = std::move(leaves.front());
      leaves.erase(leaves.begin());
      auto exact = WeightVector<Rational>::from_omegas(model, c.exponents, std::move(v), std::move(leaves));
      WeightVector<double> weights = to_double(model, exact);
      return {std::move(model), std::move(weights), std::move(exact), std::move(family)};
    }
    std::vector<LeafFunction<double>> leaves;
    for (std::size_t idx = 0; idx <= n; ++idx) {
      if (const LeafSource* s = source(idx)) {
        leaves.push_back(parse_leaf<double>(model, source_values(c, *s), idx == 0 ? "weights.v" : "weights.omega"));
      } else if (c.generator) {
        CounterRng rng(wseed, idx);
        leaves.push_back(random_weight(model, rng, c.generator->spread));
      } else {
        leaves.push_back(LeafFunction<double>::Ones(model.leaf_count()));
      }
    }
    LeafFunction<double> v = std::move(leaves.front());
    leaves.erase(leaves.begin());
    auto weights = WeightVector<double>::from_omegas(model, c.exponents, std::move(v), std::move(leaves));
    return {std::move(model), std::move(weights), std::nullopt, std::move(family)};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

VerifyOptions verify_options(const ExperimentConfig& c, unsigned threads) {
  VerifyOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.tolerance = c.tolerance;
  o.lambda_grid = c.lambda_grid;
  o.threads = threads;
  o.search = c.verify_search;
  o.convention = c.convention;
  return o;
}

}  // namespace dyadlab
