#ifndef DYADLAB_SERIALIZATION_HPP
#define DYADLAB_SERIALIZATION_HPP

#include "dyadlab/verifier.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace dyadlab {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Rational& q);
/// Accepts a number or a string such as "3/2".
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ExponentSequence& seq);
ExponentSequence exponents_from_json(const nlohmann::json& j);

/// A finite double, or the strings "inf" / "-inf" / "nan".
nlohmann::json number_to_json(double x);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LeafFunction<double>& f);
LeafFunction<double> leaf_function_from_json(const nlohmann::json& j);

/// {"head": [[...], ...], "tail_support": [leaf indices], "exponents": {...}}
nlohmann::json to_json(const FunctionVector<double>& F);
FunctionVector<double> function_vector_from_json(const DyadicModel& model, const nlohmann::json& j);

nlohmann::json to_json(const ConstantReport& report, bool per_cube = false);
nlohmann::json to_json(const Check& check);
nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const NormCertificate& certificate);

/// Wraps a payload with the schema version and a generation timestamp. The
/// timestamp is the only field that differs between identical runs.
nlohmann::json document(const std::string& kind, nlohmann::json payload, const std::string& generated_at);
/// The document without its timestamp, serialized; equal for identical runs.
std::string stable_dump(const nlohmann::json& doc);

/// One row per check: suite,check,lhs,rhs,margin,pass.
std::string to_csv(const std::vector<VerificationReport>& reports);
std::string to_text(const std::vector<VerificationReport>& reports);
std::string to_text(const std::vector<ConstantReport>& reports);
std::string to_text(const std::vector<NormCertificate>& certificates);

}  // namespace dyadlab

#endif  // DYADLAB_SERIALIZATION_HPP
