#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "idemlift/scenarios.hpp"

namespace idemlift {

/// Parses `key = value` lines; `#` starts a comment. Throws config-error on malformed lines.
std::map<std::string, std::string> parse_config(const std::string& text);

/// Applies config keys (seed, grid, n, k, m, N, degree, n1, base, perturbation, twist, section_offset,
/// tol_idem, tol_lift, tol_comm, tol_orth, tol_residual, tol_sa) to params; unknown keys are config errors.
void apply_config(const std::map<std::string, std::string>& config, ScenarioParams& params);

/// "c,h,n" or "re,im,h,n".
Grid parse_grid(const std::string& text);

/// Full command-line driver; returns the process exit status (0 pass, 1 defect failure, 2 configuration error).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idemlift
