#include "ebc/control.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ebc {

MultilinearForm MultilinearForm::determinant2d() {
  MultilinearForm L;
  L.arity = 2;
  L.tensor = {0.0, -1.0, 1.0, 0.0};  // z1_x z2_y - z1_y z2_x
  return L;
}

MultilinearForm MultilinearForm::projection(std::array<double, 2> weight) {
  MultilinearForm L;
  L.arity = 1;
  L.tensor = {weight[0], weight[1]};
  return L;
}

double MultilinearForm::value(const std::vector<std::array<double, 2>>& grads) const {
  if (static_cast<int>(grads.size()) != arity) {
    throw std::invalid_argument("MultilinearForm: arity mismatch");
  }
  double acc = 0.0;
  const int n = 1 << arity;
  for (int idx = 0; idx < n; ++idx) {
    double term = tensor[idx];
    for (int i = 0; i < arity && term != 0.0; ++i) {
      term *= grads[i][(idx >> i) & 1];
    }
    acc += term;
  }
  return acc;
}

std::array<double, 2> MultilinearForm::slot_gradient(
    int slot, const std::vector<std::array<double, 2>>& grads) const {
  std::array<double, 2> v{0.0, 0.0};
  const int n = 1 << arity;
  for (int idx = 0; idx < n; ++idx) {
    double term = tensor[idx];
    for (int i = 0; i < arity && term != 0.0; ++i) {
      if (i == slot) continue;
      term *= grads[i][(idx >> i) & 1];
    }
    v[(idx >> slot) & 1] += term;
  }
  return v;
}

HomotopyProblem::HomotopyProblem(const Mesh& mesh, Coefficient gamma0,
                                 Coefficient gamma1, SolverOptions solver)
    : mesh_(&mesh),
      gamma0_(std::move(gamma0)),
      gamma1_(std::move(gamma1)),
      solver_(solver) {
  Coefficient diff;
  diff.per_element_values.resize(gamma0_.per_element_values.size());
  for (std::size_t i = 0; i < diff.per_element_values.size(); ++i) {
    diff.per_element_values[i] =
        gamma1_.per_element_values[i] - gamma0_.per_element_values[i];
  }
  k_prime_ = assemble_stiffness(mesh, diff);
}

EllipticSystem HomotopyProblem::system_at(double s) const {
  return EllipticSystem(*mesh_, blend(gamma0_, gamma1_, s), solver_);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

BoundaryTrace zero_trace(const Mesh& mesh) {
  BoundaryTrace t;
  t.values.assign(mesh.boundary_count(), 0.0);
  return t;
}

/// Volume coupling term: the discrete form of int lambda div(gamma' grad u).
double volume_term(const SparseMatrix& k_prime, const Field& lam, const Field& u) {
  // lambda vanishes on the boundary, so the full dot product equals the
  // interior-row contraction.
  return -dot(lam.nodal_values, matvec(k_prime, u.nodal_values));
}

void check_flux_scale(double flux_norm_sq, double direction_norm_sq) {
  if (flux_norm_sq < 1e-14 * direction_norm_sq) {
    throw std::runtime_error(
        "adjoint flux degenerate: boundary flux norm vanished for a nonzero "
        "dipole direction (mesh too coarse?)");
  }
}

}  // namespace

ControlOutput control_functional(const HomotopyProblem& prob, double s,
                                 const BoundaryTrace& f, const ConstraintSpec& spec) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  const Field u = sys.solve_dirichlet(f);
  const auto y = gradient_at(mesh, u, spec.points[0]);
  const double y_norm_sq = y[0] * y[0] + y[1] * y[1];

  ControlOutput out;
  out.g = {zero_trace(mesh)};
  if (y_norm_sq == 0.0) {
    // Critical point at x_hat: F = 0 by convention; the monotone scheme
    // should never reach this from a feasible start.
    out.branch = ControlBranch::inactive;
    out.volume_terms = {0.0};
    return out;
  }

  auto [lam, load] = sys.solve_adjoint({spec.points[0], y});
  const BoundaryTrace flux = sys.conormal_flux(lam, load);
  out.flux_norm_sq = boundary_l2_inner(mesh, flux, flux);
  check_flux_scale(out.flux_norm_sq, y_norm_sq);

  const double vol = volume_term(prob.k_prime(), lam, u);
  out.volume_terms = {vol};
  out.mu = vol / out.flux_norm_sq;

  if (out.mu >= 0.0) {
    out.branch = ControlBranch::inactive;
    return out;
  }
  out.branch = ControlBranch::active;
  for (int k = 0; k < mesh.boundary_count(); ++k) {
    out.g[0].values[k] = out.mu * flux.values[k];
  }
  out.g_l2_norm = boundary_l2_norm(mesh, out.g[0]);
  return out;
}

ControlOutput control_functional_multipoint(const HomotopyProblem& prob, double s,
                                            const BoundaryTrace& f,
                                            const ConstraintSpec& spec) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  const Field u = sys.solve_dirichlet(f);
  const int np = static_cast<int>(spec.points.size());

  std::vector<BoundaryTrace> fluxes;
  Eigen::VectorXd b(np);
  for (int i = 0; i < np; ++i) {
    const auto y = gradient_at(mesh, u, spec.points[i]);
    if (y[0] * y[0] + y[1] * y[1] == 0.0) {
      std::ostringstream os;
      os << "multi-point control: gradient vanished at point " << i;
      throw std::runtime_error(os.str());
    }
    auto [lam, load] = sys.solve_adjoint({spec.points[i], y});
    fluxes.push_back(sys.conormal_flux(lam, load));
    b(i) = volume_term(prob.k_prime(), lam, u);
  }

  Eigen::MatrixXd gram(np, np);
  for (int i = 0; i < np; ++i) {
    for (int j = i; j < np; ++j) {
      gram(i, j) = gram(j, i) = boundary_l2_inner(mesh, fluxes[i], fluxes[j]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double ev_min = es.eigenvalues().minCoeff();
  const double ev_max = es.eigenvalues().maxCoeff();
  if (!(ev_min > 0.0) || ev_max / ev_min > 1e12) {
    throw std::runtime_error(
        "fluxes numerically dependent: Gram matrix ill-conditioned at this "
        "resolution");
  }
  const Eigen::VectorXd c = es.eigenvectors() *
                            (es.eigenvectors().transpose() * b).cwiseQuotient(
                                es.eigenvalues());

  ControlOutput out;
  out.g = {zero_trace(mesh)};
  out.multipliers.assign(c.data(), c.data() + np);
  out.volume_terms.assign(b.data(), b.data() + np);
  out.flux_norm_sq = gram.trace();
  for (int i = 0; i < np; ++i) {
    for (int k = 0; k < mesh.boundary_count(); ++k) {
      out.g[0].values[k] += c(i) * fluxes[i].values[k];
    }
  }
  out.g_l2_norm = boundary_l2_norm(mesh, out.g[0]);
  out.branch = c.norm() > 0.0 ? ControlBranch::active : ControlBranch::inactive;
  return out;
}

ControlOutput control_functional_multilinear(const HomotopyProblem& prob, double s,
                                             const std::vector<BoundaryTrace>& fs,
                                             const ConstraintSpec& spec) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  const int m = spec.form.arity;
  if (static_cast<int>(fs.size()) != m) {
    throw std::invalid_argument("multilinear control: trace count != arity");
  }

  std::vector<Field> u(m);
  std::vector<std::array<double, 2>> grads(m);
  for (int i = 0; i < m; ++i) {
    u[i] = sys.solve_dirichlet(fs[i]);
    grads[i] = gradient_at(mesh, u[i], spec.points[0]);
  }

  std::vector<BoundaryTrace> fluxes(m);
  double vol_sum = 0.0, denom = 0.0, dir_scale = 0.0;
  ControlOutput out;
  out.volume_terms.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto y = spec.form.slot_gradient(i, grads);
    dir_scale += y[0] * y[0] + y[1] * y[1];
    auto [lam, load] = sys.solve_adjoint({spec.points[0], y});
    fluxes[i] = sys.conormal_flux(lam, load);
    denom += boundary_l2_inner(mesh, fluxes[i], fluxes[i]);
    out.volume_terms[i] = volume_term(prob.k_prime(), lam, u[i]);
    vol_sum += out.volume_terms[i];
  }
  check_flux_scale(denom, dir_scale);

  out.flux_norm_sq = denom;
  out.mu = vol_sum / denom;
  if (spec.mu_clamp) out.mu = std::min(0.0, out.mu);

  out.g.resize(m);
  double g_norm_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    out.g[i] = zero_trace(mesh);
    for (int k = 0; k < mesh.boundary_count(); ++k) {
      out.g[i].values[k] = out.mu * fluxes[i].values[k];
    }
    g_norm_sq += boundary_l2_inner(mesh, out.g[i], out.g[i]);
  }
  out.g_l2_norm = std::sqrt(g_norm_sq);
  out.branch = out.mu != 0.0 ? ControlBranch::active : ControlBranch::inactive;
  return out;
}

ControlOutput evaluate_control(const HomotopyProblem& prob, double s,
                               const std::vector<BoundaryTrace>& fs,
                               const ConstraintSpec& spec) {
  switch (spec.kind) {
    case ConstraintKind::single_gradient:
      return control_functional(prob, s, fs.at(0), spec);
    case ConstraintKind::multi_point:
      return control_functional_multipoint(prob, s, fs.at(0), spec);
    case ConstraintKind::multilinear:
      return control_functional_multilinear(prob, s, fs, spec);
  }
  throw std::logic_error("evaluate_control: unknown constraint kind");
}

double constraint_value(const HomotopyProblem& prob, double s,
                        const std::vector<BoundaryTrace>& fs,
                        const ConstraintSpec& spec) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  switch (spec.kind) {
    case ConstraintKind::single_gradient: {
      const Field u = sys.solve_dirichlet(fs.at(0));
      const auto y = gradient_at(mesh, u, spec.points[0]);
      return std::hypot(y[0], y[1]);
    }
    case ConstraintKind::multi_point: {
      const Field u = sys.solve_dirichlet(fs.at(0));
      double v = std::numeric_limits<double>::infinity();
      for (const auto& p : spec.points) {
        const auto y = gradient_at(mesh, u, p);
        v = std::min(v, std::hypot(y[0], y[1]));
      }
      return v;
    }
    case ConstraintKind::multilinear: {
      std::vector<std::array<double, 2>> grads(spec.form.arity);
      for (int i = 0; i < spec.form.arity; ++i) {
        const Field u = sys.solve_dirichlet(fs.at(i));
        grads[i] = gradient_at(mesh, u, spec.points[0]);
      }
      return spec.form.value(grads);
    }
  }
  throw std::logic_error("constraint_value: unknown constraint kind");
}

double naive_scaling_step(const HomotopyProblem& prob, double s, double phi,
                          const BoundaryTrace& f0, const PointLocation& point) {
  if (phi == 0.0) {
    throw std::invalid_argument("naive_scaling_step: phi must be nonzero");
  }
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  BoundaryTrace f;
  f.values.resize(f0.values.size());
  for (std::size_t k = 0; k < f0.values.size(); ++k) {
    f.values[k] = phi * f0.values[k];
  }
  const Field u = sys.solve_dirichlet(f);
  const auto y = gradient_at(mesh, u, point);
  const double y_norm_sq = y[0] * y[0] + y[1] * y[1];
  if (y_norm_sq == 0.0) {
    throw std::runtime_error("naive scheme hit a critical point");
  }
  const Field w = sys.solve_linearized(prob.k_prime(), u, zero_trace(mesh));
  const auto gw = gradient_at(mesh, w, point);
  const double ratio = -(y[0] * gw[0] + y[1] * gw[1]) / y_norm_sq;
  return phi * std::max(0.0, ratio);
}

}  // namespace ebc
