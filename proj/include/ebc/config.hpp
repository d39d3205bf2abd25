#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ebc/coefficients.hpp"
#include "ebc/control.hpp"
#include "ebc/homotopy.hpp"

namespace ebc {

/// Config parse failure with the offending line or key in the message.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat dotted-key config text: `key = value` lines, `#` comments.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct RunConfig {
  int n_per_side = 32;
  SolverOptions solver;
  CoefficientExpr coefficient;

  ConstraintKind constraint_kind = ConstraintKind::single_gradient;
  std::vector<std::array<double, 2>> points{{0.5, 0.5}};
  double threshold = 1.0;
  bool mu_clamp = false;
  std::string form_preset = "determinant";  // or "projection"
  int form_arity = 2;

  IntegratorOptions integrator;

  std::string output_dir = "out";
  std::uint64_t seed = 1;

  // sweep subcommand only
  std::string sweep_parameter;
  std::vector<std::string> sweep_values;

  std::map<std::string, std::string> raw;
};

RunConfig parse_run_config(const std::string& path);

/// Constraint spec with points located on the given mesh.
ConstraintSpec make_constraint_spec(const RunConfig& config, const Mesh& mesh);

/// Initial boundary data: trace of x1, or x1/x2 cycled per solution for
/// the multilinear kind.
std::vector<BoundaryTrace> initial_traces(const RunConfig& config, const Mesh& mesh);

}  // namespace ebc
