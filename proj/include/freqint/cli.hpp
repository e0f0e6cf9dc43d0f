#pragma once

// Command-line front end. Every subcommand writes CSV to the --out path or to
// the supplied stream; stability-map also writes a JSON sidecar next to
// --out.

#include <cstddef>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "freqint/integrators.hpp"
#include "freqint/simulate.hpp"

namespace freqint::cli {

enum class Command {
  coeffs,
  freq_sweep,
  stability_map,
  transient_gains,
  verify_roots,
  case_table,
  demo_transient,
  simulate,
};

enum class InputDerivative { analytic, backward, central };

struct RunConfig {
  Command command = Command::coeffs;
  IntegratorKind integrator = IntegratorKind::A;
  double f_select_hz = 60.0;
  double h = 0.002;
  double t_end = 1.0;

  // Grid flags. Unset bounds fall back to per-command defaults.
  std::optional<double> re_min, re_max, im_min, im_max;
  std::optional<std::size_t> n;
  std::optional<double> f_min_hz, f_max_hz;
  bool log_spacing = false;

  double tolerance = 1e-9;
  int case_id = 1;
  std::optional<double> pole;  // overrides the test-system pole a
  std::optional<double> x0;
  std::optional<IntegratorKind> startup_kind;
  int startup_steps = 5;
  InputDerivative u_dot = InputDerivative::analytic;
  unsigned workers = 1;
  std::string out;  // empty: write to the caller's stream

  double omega_select() const;
};

/// Invalid flag combination or a violated precondition; reported before any
/// computation starts.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError (StepSizeError messages included) when the config does
/// not meet the preconditions of its command.
void validate(const RunConfig& config);

/// Validates, runs the command and writes its output to `out` (or to
/// config.out when set).
void dispatch(const RunConfig& config, std::ostream& out);

/// Parses argv, dispatches, and returns the process exit status. Diagnostics
/// go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace freqint::cli
