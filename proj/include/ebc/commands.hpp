#pragma once

#include <string>

namespace ebc {

/// Exit codes: 0 success, 1 config error, 2 constraint failure,
/// 3 integrator failure (partial trajectory still written).
int cmd_synthesize(const std::string& config_path);

/// Exit codes: 0 all certificates pass, 1 config error, 2 some failed.
int cmd_certify(const std::string& config_path);

/// Exit codes: 0 both schemes complete, 1 config error, 4 naive scheme
/// failed while the optimal scheme completed.
int cmd_compare_naive(const std::string& config_path);

/// Runs synthesize once per sweep value, each into its own subdirectory.
int cmd_sweep(const std::string& config_path, int jobs = 1);

}  // namespace ebc
