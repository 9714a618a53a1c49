#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fermiwork {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;          // unreadable input, parse failures
inline constexpr int kExitValidationError = 2;  // unphysical input, capacity limits

/// Parsed command line: one subcommand plus its options.
struct RunConfig {
  std::string command;               // validate | minimize | ergotropy | activate | sweep
  std::string input_path;            // covariance file, where applicable
  std::vector<double> betas;         // --betas
  std::vector<double> omegas;        // --omegas (per mode)
  double omega_common = 0.0;         // --omega (same frequency for every mode); 0 = unset
  std::vector<std::string> methods;  // --method for ergotropy
  std::uint64_t trials = 100000;     // --trials (sampler)
  std::uint64_t seed = 42;           // --seed
  int max_copies = 5;                // --max-copies
  std::string trace_path;            // --trace (minimize stage CSV)
  std::string config_path;           // --config (sweep grid file)
  double tol = 1e-8;                 // --tol (passivity threshold)
};

/// All numeric CLI output: 12 significant digits, '.' decimal point, "-0"
/// normalized to "0".
std::string format_number(double x);

/// Grid for the two-mode thermal sweep, read from a flat key = value file.
/// Values are comma lists ("0.5,1,2") or start:step:stop ranges ("1:0.5:3").
struct SweepConfig {
  std::vector<double> beta_a;
  std::vector<double> beta_b;
  std::vector<double> omega_a;
  std::vector<double> omega_b;
};

SweepConfig parse_sweep_config(std::istream& in);

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_minimize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_ergotropy(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_activate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full argument parse + dispatch; never throws, maps errors to exit codes.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fermiwork
