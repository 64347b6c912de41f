#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vincl::cli {

enum class Format { json, csv, human };

struct CliConfig {
  std::string subcommand;  ///< solve | verify | check-condition | trace-export | list-instances
  std::optional<std::string> instance_name;
  std::optional<std::string> instance_file;
  std::optional<double> rho;
  double tol = 1e-10;
  std::size_t max_iters = 1000;
  std::uint64_t seed = 42;
  std::size_t samples = 512;
  /// Geometric error sequence e_n = c0 factor^n d/||d||; zero when c0 is unset.
  std::optional<double> error_c0;
  double error_factor = 0.5;
  std::optional<std::vector<double>> error_direction;
  std::optional<std::vector<double>> z0;
  std::optional<std::string> output;  ///< stdout when unset
  std::optional<Format> format;       ///< per-subcommand default when unset
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 1;
inline constexpr int not_converged = 2;
inline constexpr int expectation_unmet = 3;
inline constexpr int condition_violated = 4;
inline constexpr int non_surjective = 5;
}  // namespace exit_code

/// Executes one subcommand. Results go to cfg.output (written atomically) or
/// `out`; diagnostics go to `err`.
int run(const CliConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace vincl::cli
