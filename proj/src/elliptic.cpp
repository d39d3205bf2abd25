#include "ebc/elliptic.hpp"

#include <cmath>
#include <stdexcept>

namespace ebc {

SparseMatrix assemble_stiffness(const Mesh& mesh, const Coefficient& gamma) {
  if (static_cast<int>(gamma.per_element_values.size()) != mesh.triangle_count()) {
    throw std::invalid_argument("assemble_stiffness: coefficient/mesh mismatch");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(9 * mesh.triangle_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double a = triangle_area(mesh, t);
    const double g = gamma.per_element_values[t];
    const auto grads = basis_gradients(mesh, t);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double k = g * a * (grads[i][0] * grads[j][0] +
                                  grads[i][1] * grads[j][1]);
        triplets.push_back({tri[i], tri[j], k});
      }
    }
  }
  return from_triplets(mesh.node_count(), mesh.node_count(), std::move(triplets),
                       /*symmetric=*/true);
}

std::vector<double> dipole_load(const Mesh& mesh, const DipoleSpec& dipole) {
  std::vector<double> r(mesh.node_count(), 0.0);
  const int t = dipole.point.triangle_index;
  if (t < 0 || t >= mesh.triangle_count()) {
    throw std::invalid_argument("dipole_load: invalid point location");
  }
  const auto grads = basis_gradients(mesh, t);
  const auto& tri = mesh.triangles[t];
  for (int k = 0; k < 3; ++k) {
    r[tri[k]] = dipole.direction[0] * grads[k][0] +
                dipole.direction[1] * grads[k][1];
  }
  return r;
}

std::array<double, 2> gradient_at(const Mesh& mesh, const Field& u,
                                  const PointLocation& loc) {
  const int t = loc.triangle_index;
  const auto grads = basis_gradients(mesh, t);
  const auto& tri = mesh.triangles[t];
  std::array<double, 2> g{0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    g[0] += u.nodal_values[tri[k]] * grads[k][0];
    g[1] += u.nodal_values[tri[k]] * grads[k][1];
  }
  return g;
}

double boundary_l2_inner(const Mesh& mesh, const BoundaryTrace& a,
                         const BoundaryTrace& b) {
  const int nb = mesh.boundary_count();
  if (static_cast<int>(a.values.size()) != nb ||
      static_cast<int>(b.values.size()) != nb) {
    throw std::invalid_argument("boundary_l2_inner: trace length mismatch");
  }
  const auto m = boundary_lumped_mass(mesh);
  double acc = 0.0;
  for (int k = 0; k < nb; ++k) acc += m[k] * a.values[k] * b.values[k];
  return acc;
}

double boundary_l2_norm(const Mesh& mesh, const BoundaryTrace& a) {
  return std::sqrt(boundary_l2_inner(mesh, a, a));
}

namespace {

SparseMatrix interior_submatrix(const Mesh& mesh, const SparseMatrix& k_full) {
  std::vector<Triplet> triplets;
  for (int r = 0; r < k_full.n_rows; ++r) {
    const int ri = mesh.interior_position[r];
    if (ri < 0) continue;
    for (int k = k_full.row_offsets[r]; k < k_full.row_offsets[r + 1]; ++k) {
      const int ci = mesh.interior_position[k_full.col_indices[k]];
      if (ci < 0) continue;
      triplets.push_back({ri, ci, k_full.values[k]});
    }
  }
  return from_triplets(mesh.interior_count(), mesh.interior_count(),
                       std::move(triplets), /*symmetric=*/true);
}

}  // namespace

EllipticSystem::EllipticSystem(const Mesh& mesh, Coefficient gamma,
                               SolverOptions opts)
    : mesh_(&mesh), gamma_(std::move(gamma)), opts_(opts) {
  if (gamma_.lower_bound <= 0.0) {
    throw std::invalid_argument("EllipticSystem: coefficient must be positive");
  }
  k_full_ = assemble_stiffness(mesh, gamma_);
  k_interior_ = interior_submatrix(mesh, k_full_);
  interior_solver_ = std::make_shared<Solver>(k_interior_, opts_.method);
  lumped_boundary_mass_ = boundary_lumped_mass(mesh);
}

Field EllipticSystem::lift_and_solve(const BoundaryTrace& bc,
                                     const std::vector<double>* interior_extra) const {
  const Mesh& m = *mesh_;
  if (static_cast<int>(bc.values.size()) != m.boundary_count()) {
    throw std::invalid_argument("solve: boundary trace length mismatch");
  }
  // rhs_I = -[K w]_I + extra, where w extends the boundary data by zero
  std::vector<double> w(m.node_count(), 0.0);
  for (int k = 0; k < m.boundary_count(); ++k) {
    w[m.boundary_nodes[k]] = bc.values[k];
  }
  const auto kw = matvec(k_full_, w);
  std::vector<double> rhs(m.interior_count(), 0.0);
  for (int i = 0; i < m.interior_count(); ++i) {
    rhs[i] = -kw[m.interior_nodes[i]];
    if (interior_extra) rhs[i] += (*interior_extra)[i];
  }
  auto [x, report] = interior_solver_->solve(rhs, opts_.tol);
  (void)report;
  Field u;
  u.nodal_values = std::move(w);
  for (int i = 0; i < m.interior_count(); ++i) {
    u.nodal_values[m.interior_nodes[i]] = x[i];
  }
  return u;
}

Field EllipticSystem::solve_dirichlet(const BoundaryTrace& f,
                                      const std::vector<double>* rhs_volume) const {
  if (!rhs_volume) return lift_and_solve(f, nullptr);
  if (static_cast<int>(rhs_volume->size()) != mesh_->node_count()) {
    throw std::invalid_argument("solve_dirichlet: rhs length mismatch");
  }
  std::vector<double> extra(mesh_->interior_count());
  for (int i = 0; i < mesh_->interior_count(); ++i) {
    extra[i] = (*rhs_volume)[mesh_->interior_nodes[i]];
  }
  return lift_and_solve(f, &extra);
}

Field EllipticSystem::solve_linearized(const SparseMatrix& k_prime,
                                       const Field& u,
                                       const BoundaryTrace& g) const {
  // interior rows: K(gamma_s) v = -K(gamma') u
  const auto kpu = matvec(k_prime, u.nodal_values);
  std::vector<double> extra(mesh_->interior_count());
  for (int i = 0; i < mesh_->interior_count(); ++i) {
    extra[i] = -kpu[mesh_->interior_nodes[i]];
  }
  return lift_and_solve(g, &extra);
}

std::pair<Field, std::vector<double>> EllipticSystem::solve_adjoint(
    const DipoleSpec& dipole) const {
  const auto load = dipole_load(*mesh_, dipole);
  // K_II is symmetric, so the transpose system collapses to the cached solver.
  std::vector<double> rhs(mesh_->interior_count());
  for (int i = 0; i < mesh_->interior_count(); ++i) {
    rhs[i] = load[mesh_->interior_nodes[i]];
  }
  auto [x, report] = interior_solver_->solve(rhs, opts_.tol);
  (void)report;
  Field lam;
  lam.nodal_values.assign(mesh_->node_count(), 0.0);
  for (int i = 0; i < mesh_->interior_count(); ++i) {
    lam.nodal_values[mesh_->interior_nodes[i]] = x[i];
  }
  return {std::move(lam), load};
}

BoundaryTrace EllipticSystem::conormal_flux(const Field& u,
                                            const std::vector<double>& load) const {
  const Mesh& m = *mesh_;
  if (static_cast<int>(load.size()) != m.node_count()) {
    throw std::invalid_argument("conormal_flux: load length mismatch");
  }
  const auto ku = matvec(k_full_, u.nodal_values);
  BoundaryTrace flux;
  flux.values.resize(m.boundary_count());
  for (int k = 0; k < m.boundary_count(); ++k) {
    const int node = m.boundary_nodes[k];
    flux.values[k] = (ku[node] - load[node]) / lumped_boundary_mass_[k];
  }
  return flux;
}

}  // namespace ebc
