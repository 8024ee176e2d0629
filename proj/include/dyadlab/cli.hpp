#ifndef DYADLAB_CLI_HPP
#define DYADLAB_CLI_HPP

#include "dyadlab/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace dyadlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitConfigError = 2;

/// dyadlab <constants|verify|search|bench> --config <path> [--threads N]
///         [--mode float|exact] [--out DIR]
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes verify.{json,csv,txt} and one witness_<suite>.json per report into
/// `dir`, prints the text report (with the witness file of every failing
/// check) and returns the exit status.
int emit_verification(const ExperimentConfig& config, const std::vector<VerificationReport>& reports,
                      const std::filesystem::path& dir, std::ostream& out);

}  // namespace dyadlab

#endif  // DYADLAB_CLI_HPP
