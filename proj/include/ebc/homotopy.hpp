#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ebc/control.hpp"

namespace ebc {

enum class IntegratorMethod { euler, rk4 };

struct IntegratorOptions {
  IntegratorMethod method = IntegratorMethod::euler;
  double initial_step = 1.0 / 64.0;
  double min_step = 1e-6;
  double slack_tolerance = -1.0;  // < 0: default to 1e-6 * threshold
};

/// One accepted point on the continuation trajectory.
struct HomotopyState {
  double s = 0.0;
  std::vector<BoundaryTrace> f;
  double constraint_value = 0.0;
  double mu = 0.0;
  double g_norm = 0.0;
  double step_size = 0.0;
  ControlBranch branch = ControlBranch::inactive;
};

struct Trajectory {
  std::vector<HomotopyState> states;
  int accepted_steps = 0;
  int rejected_steps = 0;
  std::vector<BoundaryTrace> final_f;
};

/// Integration failure carrying the partial trajectory up to the failure.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_trajectory(std::move(partial)) {}
  Trajectory partial_trajectory;
};

/// Integrate df/ds = F(f, s) from s=0 to s=1 with a monotonicity-guarded
/// adaptive step: any trial step that drops the protected constraint by
/// more than the slack tolerance is halved and retried.
Trajectory integrate(const HomotopyProblem& prob,
                     const std::vector<BoundaryTrace>& f0,
                     const ConstraintSpec& spec, const IntegratorOptions& opts);

struct FinalReport {
  double constraint_value = 0.0;
  double threshold = 0.0;
  double slack = 0.0;
  bool passed = false;
};

/// Independent check of the synthesized boundary data: fresh solve at s=1
/// with no cached state.
FinalReport verify_final(const Mesh& mesh, const Coefficient& gamma,
                         const std::vector<BoundaryTrace>& f_final,
                         const ConstraintSpec& spec, double slack,
                         SolverOptions solver = {});

}  // namespace ebc
