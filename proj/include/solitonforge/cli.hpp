#pragma once

#include <iosfwd>
#include <string>

namespace solitonforge::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMathFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command from a JSON config document (text form). The report is
/// written to `out_path`, or to `out` when the path is empty. Diagnostics go
/// to `err`. Returns the exit-code contract value: 0 pass, 1 mathematical
/// failure (residuals over tolerance, degenerate/non-invariant fields,
/// singular starts), 2 usage or config error.
int run_config_text(const std::string& config_text, const std::string& out_path,
                    std::ostream& out, std::ostream& err);

/// argv entry point:
///   solitonforge <verify|ode|family|invariance> --config <path> [--out <path>]
/// The subcommand must match the config's "command" field.
int run(int argc, const char* const* argv);

}  // namespace solitonforge::cli
