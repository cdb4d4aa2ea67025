#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qrotor/config.hpp"

namespace qrotor {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int config = 2;
inline constexpr int convergence = 3;
inline constexpr int validity = 4;
}  // namespace exit_code

struct CommandOverrides {
  std::optional<double> omega;  // rotation-scan: single Omega, rad/s
  std::optional<int> jmax;      // lineshape
  bool strict = false;          // validity warnings become errors
};

/// Runs one subcommand and writes its artifact(s) to `out`; a lineshape in CSV
/// format also writes the fit next to `out_path` (<out_path>.fit.json) when given.
/// Throws module errors; map them with exit_code_for_current_exception.
void run_subcommand(const std::string& command, const RunConfig& cfg,
                    const CommandOverrides& overrides, std::ostream& out,
                    const std::optional<std::string>& out_path, std::ostream& diag);

/// For use inside a catch block; prints the diagnostic to `diag`.
int exit_code_for_current_exception(std::ostream& diag);

/// Full command line (argv[0] excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qrotor
