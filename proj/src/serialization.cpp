#include "dyadlab/serialization.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace dyadlab {

using nlohmann::json;

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return to_rational(j.get<double>());
  throw std::invalid_argument("expected a number or a rational string, got " + j.dump());
}

json to_json(const ExponentSequence& seq) {
  json head = json::array();
  for (const Rational& p : seq.head()) head.push_back(to_json(p));
  json out{{"head", std::move(head)}};
  if (seq.tail()) {
    out["tail"] = {{"kind", "geometric"},
                   {"scale", to_json(seq.tail()->scale)},
                   {"base", to_json(seq.tail()->base)},
                   {"start", seq.tail()->start}};
  }
  return out;
}

ExponentSequence exponents_from_json(const json& j) {
  std::vector<Rational> head;
  for (const json& p : j.at("head")) head.push_back(rational_from_json(p));
  std::optional<GeometricTail> tail;
  if (j.contains("tail") && !j.at("tail").is_null()) {
    const json& t = j.at("tail");
    if (t.value("kind", std::string("geometric")) != "geometric") {
      throw std::invalid_argument("only geometric exponent tails are supported");
    }
    tail = GeometricTail{rational_from_json(t.value("scale", json(1))), rational_from_json(t.value("base", json(2))),
                         t.value("start", head.size() + 1)};
  }
  return ExponentSequence(std::move(head), std::move(tail));
}

json number_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return to_double(parse_rational(s));
}

json to_json(const LeafFunction<double>& f) {
  json out = json::array();
  for (Eigen::Index x = 0; x < f.size(); ++x) out.push_back(f[x]);
  return out;
}

LeafFunction<double> leaf_function_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("a leaf function must be a JSON array");
  LeafFunction<double> f(static_cast<Eigen::Index>(j.size()));
  for (std::size_t x = 0; x < j.size(); ++x) f[static_cast<Eigen::Index>(x)] = number_from_json(j[x]);
  return f;
}

json to_json(const FunctionVector<double>& F) {
  json head = json::array();
  for (const auto& f : F.head) head.push_back(to_json(f));
  json support = json::array();
  for (Eigen::Index x = 0; x < F.tail_support.size(); ++x) {
    if (F.tail_support[x]) support.push_back(x);
  }
  return {{"head", std::move(head)}, {"tail_support", std::move(support)}, {"exponents", to_json(F.exponents)}};
}

FunctionVector<double> function_vector_from_json(const DyadicModel& model, const json& j) {
  std::vector<LeafFunction<double>> head;
  for (const json& f : j.at("head")) head.push_back(leaf_function_from_json(f));
  Mask support = Mask::Constant(model.leaf_count(), !j.contains("tail_support"));
  if (j.contains("tail_support")) {
    for (const json& x : j.at("tail_support")) {
      const auto i = x.get<std::int64_t>();
      if (i < 0 || i >= model.leaf_count()) throw std::invalid_argument("tail support index out of range");
      support[i] = true;
    }
  }
  return make_function_vector(model, std::move(head), std::move(support), exponents_from_json(j.at("exponents")));
}

json to_json(const ConstantReport& report, bool per_cube) {
  json out{{"name", report.name},
           {"value", number_to_json(report.value)},
           {"attaining_cube", report.attaining_cube ? json(to_string(*report.attaining_cube)) : json(nullptr)},
           {"mode", report.mode}};
  if (report.exact) {
    out["exact"] = {{"power", report.exact->power.str()}, {"value_power", to_string(report.exact->value_power)}};
  }
  if (per_cube) {
    json cubes = json::object();
    for (const auto& [cube, value] : report.per_cube_values) cubes[to_string(cube)] = number_to_json(value);
    out["per_cube_values"] = std::move(cubes);
  }
  return out;
}

json to_json(const Check& check) {
  return {{"description", check.description},
          {"relation", check.relation},
          {"lhs", number_to_json(check.lhs)},
          {"rhs", number_to_json(check.rhs)},
          {"margin", number_to_json(check.margin)},
          {"pass", check.pass},
          {"informative", check.informative},
          {"samples", check.samples},
          {"violations", check.violations}};
}

json to_json(const VerificationReport& report) {
  json checks = json::array();
  for (const Check& c : report.checks) checks.push_back(to_json(c));
  json out{{"suite", report.suite},
           {"pass", report.passed()},
           {"mode", report.mode},
           {"seed", report.seed},
           {"tolerance", report.tolerance},
           {"constants", report.constants},
           {"checks", std::move(checks)},
           {"witnesses", report.witnesses}};
  if (report.skipped) out["skipped"] = *report.skipped;
  return out;
}

json to_json(const NormCertificate& certificate) {
  const WeightVector<double>& W = certificate.spec.weights;
  json omegas = json::array();
  for (const auto& w : W.omegas()) omegas.push_back(to_json(w));
  return {{"operator", to_string(certificate.spec.kind)},
          {"exponents", to_json(W.exponents())},
          {"weights", {{"v", to_json(W.v())}, {"omega", std::move(omegas)}}},
          {"lower_bound", number_to_json(certificate.lower_bound)},
          {"strategy", certificate.strategy},
          {"testing_cube", certificate.testing_cube ? json(to_string(*certificate.testing_cube)) : json(nullptr)},
          {"iterations", certificate.iterations},
          {"seed", certificate.seed},
          {"witness", to_json(certificate.witness)}};
}

json document(const std::string& kind, json payload, const std::string& generated_at) {
  return {{"schema", kSchemaVersion}, {"kind", kind}, {"generated_at", generated_at}, {"data", std::move(payload)}};
}

std::string stable_dump(const json& doc) {
  json copy = doc;
  copy.erase("generated_at");
  return copy.dump(2);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string to_csv(const std::vector<VerificationReport>& reports) {
  std::string out = "suite,check,lhs,rhs,margin,pass\n";
  for (const auto& r : reports) {
    for (const auto& c : r.checks) {
      out += csv_field(r.suite) + "," + csv_field(c.description) + "," + num(c.lhs) + "," + num(c.rhs) + "," +
             num(c.margin) + "," + (c.pass ? "true" : "false") + "\n";
    }
  }
  return out;
}

std::string to_text(const std::vector<VerificationReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (const auto& r : reports) {
    os << "[" << r.suite << "] " << (r.skipped ? "SKIPPED" : r.passed() ? "PASS" : "FAIL") << "  (seed " << r.seed
       << ", mode " << r.mode << ", tol " << r.tolerance << ")\n";
    if (r.skipped) os << "  reason: " << *r.skipped << "\n";
    for (const auto& c : r.checks) {
      os << "  " << (c.pass ? "ok  " : c.informative ? "info" : "FAIL") << "  " << c.description << "\n"
         << "        lhs " << c.lhs << "  " << c.relation << "  rhs " << c.rhs << "  margin " << c.margin;
      if (c.samples > 1) os << "  (" << c.violations << "/" << c.samples << " violations)";
      if (c.informative) os << "  [informative]";
      os << "\n";
    }
  }
  return os.str();
}

std::string to_text(const std::vector<ConstantReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const auto& r : reports) {
    os << std::left << std::setw(22) << r.name << " " << std::setw(20) << r.value << " at "
       << (r.attaining_cube ? to_string(*r.attaining_cube) : "-") << "  (" << r.mode << ")\n";
  }
  return os.str();
}

std::string to_text(const std::vector<NormCertificate>& certificates) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const auto& c : certificates) {
    os << std::left << std::setw(8) << to_string(c.spec.kind) << " lower bound " << c.lower_bound << "  via "
       << c.strategy;
    if (c.testing_cube) os << " at " << to_string(*c.testing_cube);
    os << "  (" << c.iterations << " evaluations, seed " << c.seed << ")\n";
  }
  return os.str();
}

}  // namespace dyadlab
