#include "ebc/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ebc {

namespace {

using Traces = std::vector<BoundaryTrace>;

Traces axpy(const Traces& f, double h, const Traces& df) {
  Traces out = f;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < out[i].values.size(); ++k) {
      out[i].values[k] += h * df[i].values[k];
    }
  }
  return out;
}

Traces combine_rk4(const Traces& f, double h, const Traces& k1, const Traces& k2,
                   const Traces& k3, const Traces& k4) {
  Traces out = f;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k = 0; k < out[i].values.size(); ++k) {
      out[i].values[k] += h / 6.0 *
                          (k1[i].values[k] + 2.0 * k2[i].values[k] +
                           2.0 * k3[i].values[k] + k4[i].values[k]);
    }
  }
  return out;
}

}  // namespace

Trajectory integrate(const HomotopyProblem& prob, const Traces& f0,
                     const ConstraintSpec& spec, const IntegratorOptions& opts) {
  const double slack = opts.slack_tolerance >= 0.0
                           ? opts.slack_tolerance
                           : 1e-6 * spec.threshold;
  Trajectory traj;

  double s = 0.0;
  Traces f = f0;
  double cv = constraint_value(prob, s, f, spec);
  if (cv < spec.threshold - slack) {
    std::ostringstream os;
    os << "integrate: initial data infeasible, constraint value " << cv
       << " below threshold " << spec.threshold;
    throw IntegrationError(os.str(), traj);
  }
  ControlOutput ctrl = evaluate_control(prob, s, f, spec);
  traj.states.push_back({s, f, cv, ctrl.mu, ctrl.g_l2_norm, 0.0, ctrl.branch});

  double h = opts.initial_step;
  while (s < 1.0) {
    h = std::min(h, 1.0 - s);
    Traces f_new;
    try {
      if (opts.method == IntegratorMethod::euler) {
        f_new = axpy(f, h, ctrl.g);
      } else {
        const Traces& k1 = ctrl.g;
        const Traces k2 = evaluate_control(prob, s + 0.5 * h,
                                           axpy(f, 0.5 * h, k1), spec).g;
        const Traces k3 = evaluate_control(prob, s + 0.5 * h,
                                           axpy(f, 0.5 * h, k2), spec).g;
        const Traces k4 = evaluate_control(prob, s + h, axpy(f, h, k3), spec).g;
        f_new = combine_rk4(f, h, k1, k2, k3, k4);
      }
    } catch (const IntegrationError&) {
      throw;
    } catch (const std::exception& e) {
      throw IntegrationError(std::string("integrate: control evaluation failed: ") +
                                 e.what(),
                             traj);
    }

    const double s_new = s + h;
    const double cv_new = constraint_value(prob, s_new, f_new, spec);
    if (cv_new < cv - slack) {
      ++traj.rejected_steps;
      h *= 0.5;
      if (h < opts.min_step) {
        std::ostringstream os;
        os << "integrate: step size underflow at s=" << s << " (constraint "
           << cv_new << " after trial step, previous " << cv << ")";
        throw IntegrationError(os.str(), traj);
      }
      continue;
    }

    s = s_new;
    f = std::move(f_new);
    cv = cv_new;
    try {
      ctrl = evaluate_control(prob, s, f, spec);
    } catch (const std::exception& e) {
      throw IntegrationError(std::string("integrate: control evaluation failed: ") +
                                 e.what(),
                             traj);
    }
    traj.states.push_back({s, f, cv, ctrl.mu, ctrl.g_l2_norm, h, ctrl.branch});
    ++traj.accepted_steps;
    h = std::min(opts.initial_step, 2.0 * h);
  }

  traj.final_f = f;
  return traj;
}

FinalReport verify_final(const Mesh& mesh, const Coefficient& gamma,
                         const Traces& f_final, const ConstraintSpec& spec,
                         double slack, SolverOptions solver) {
  // Fresh problem, fresh factorizations: no state shared with integrate().
  HomotopyProblem fresh(mesh, gamma, gamma, solver);
  FinalReport report;
  report.constraint_value = constraint_value(fresh, 1.0, f_final, spec);
  report.threshold = spec.threshold;
  report.slack = slack;
  report.passed = report.constraint_value >= spec.threshold - slack;
  return report;
}

}  // namespace ebc
