#pragma once

#include <array>
#include <memory>
#include <vector>

#include "ebc/elliptic.hpp"

namespace ebc {

enum class ConstraintKind { single_gradient, multi_point, multilinear };

/// Multilinear form L : (R^2)^m -> R stored as a dense coefficient tensor
/// indexed by one component bit per slot. The 2D determinant of two
/// gradients is the canonical preset.
struct MultilinearForm {
  int arity = 1;
  std::vector<double> tensor;  // 2^arity entries, slot i selects bit i

  static MultilinearForm determinant2d();
  static MultilinearForm projection(std::array<double, 2> weight);  // m = 1

  double value(const std::vector<std::array<double, 2>>& grads) const;
  /// Partial derivative of L in slot `slot` at the given gradients:
  /// a linear functional on R^2, returned as its representing vector.
  std::array<double, 2> slot_gradient(int slot,
                                      const std::vector<std::array<double, 2>>& grads) const;
};

struct ConstraintSpec {
  ConstraintKind kind = ConstraintKind::single_gradient;
  std::vector<PointLocation> points;
  std::vector<std::array<double, 2>> point_coords;  // for diagnostics/configs
  MultilinearForm form;                             // multilinear kind only
  double threshold = 1.0;
  bool mu_clamp = false;  // multilinear kind only

  int num_solutions() const {
    return kind == ConstraintKind::multilinear ? form.arity : 1;
  }
};

enum class ControlBranch { inactive, active };

struct ControlOutput {
  std::vector<BoundaryTrace> g;      // one trace per solution
  double mu = 0.0;                   // single/multilinear multiplier
  std::vector<double> multipliers;   // multi_point Gram coefficients
  std::vector<double> volume_terms;
  double flux_norm_sq = 0.0;
  ControlBranch branch = ControlBranch::inactive;
  double g_l2_norm = 0.0;
};

/// One homotopy instance: endpoint coefficients plus the cached stiffness
/// of gamma' = gamma - gamma0 (s-independent).
class HomotopyProblem {
 public:
  HomotopyProblem(const Mesh& mesh, Coefficient gamma0, Coefficient gamma1,
                  SolverOptions solver = {});

  const Mesh& mesh() const { return *mesh_; }
  const Coefficient& gamma0() const { return gamma0_; }
  const Coefficient& gamma1() const { return gamma1_; }
  const SparseMatrix& k_prime() const { return k_prime_; }
  const SolverOptions& solver_options() const { return solver_; }

  /// Elliptic system for gamma_s = (1-s) gamma0 + s gamma1.
  EllipticSystem system_at(double s) const;

 private:
  const Mesh* mesh_;
  Coefficient gamma0_;
  Coefficient gamma1_;
  SparseMatrix k_prime_;
  SolverOptions solver_;
};

/// Minimal-norm boundary velocity protecting |grad u(x_hat)|, two-branch
/// multiplier formula.
ControlOutput control_functional(const HomotopyProblem& prob, double s,
                                 const BoundaryTrace& f, const ConstraintSpec& spec);

/// Span-of-fluxes control enforcing equality at every protected point.
ControlOutput control_functional_multipoint(const HomotopyProblem& prob, double s,
                                            const BoundaryTrace& f,
                                            const ConstraintSpec& spec);

/// Shared-multiplier control for a multilinear form of m solution gradients.
ControlOutput control_functional_multilinear(const HomotopyProblem& prob, double s,
                                             const std::vector<BoundaryTrace>& fs,
                                             const ConstraintSpec& spec);

/// Dispatch on spec.kind; fs holds one trace per solution.
ControlOutput evaluate_control(const HomotopyProblem& prob, double s,
                               const std::vector<BoundaryTrace>& fs,
                               const ConstraintSpec& spec);

/// Protected quantity at (s, fs): |grad u| (single), min_i |grad u(x_i)|
/// (multi_point), or L(grad u^1, ..., grad u^m) (multilinear).
double constraint_value(const HomotopyProblem& prob, double s,
                        const std::vector<BoundaryTrace>& fs,
                        const ConstraintSpec& spec);

/// Naive scaling baseline: returns phi'(s) for f_s = phi(s) f0.
double naive_scaling_step(const HomotopyProblem& prob, double s, double phi,
                          const BoundaryTrace& f0, const PointLocation& point);

}  // namespace ebc
