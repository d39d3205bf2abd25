#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "ebc/coefficients.hpp"
#include "ebc/linalg.hpp"
#include "ebc/mesh.hpp"

namespace ebc {

/// Nodal scalar function on the mesh.
struct Field {
  std::vector<double> nodal_values;
};

/// Restriction of a nodal function to boundary nodes, in loop order.
struct BoundaryTrace {
  std::vector<double> values;
};

/// Dipole source d_y delta_{x_hat}: evaluation point plus direction.
struct DipoleSpec {
  PointLocation point;
  std::array<double, 2> direction{0.0, 0.0};
};

struct SolverOptions {
  SolveMethod method = SolveMethod::automatic;
  double tol = 1e-12;
};

/// Full (un-eliminated) P1 stiffness matrix for div(gamma grad .).
/// Row sums vanish: constants are in the kernel.
SparseMatrix assemble_stiffness(const Mesh& mesh, const Coefficient& gamma);

/// Discrete load representing the functional w -> y . grad w(x_hat):
/// r_j = y . grad phi_j(x_hat) on the containing triangle, zero elsewhere.
std::vector<double> dipole_load(const Mesh& mesh, const DipoleSpec& dipole);

/// P1 gradient of a field on the triangle containing the location.
std::array<double, 2> gradient_at(const Mesh& mesh, const Field& u,
                                  const PointLocation& loc);

/// Lumped L2(boundary) inner product: sum_b m_b a_b b_b.
double boundary_l2_inner(const Mesh& mesh, const BoundaryTrace& a,
                         const BoundaryTrace& b);

double boundary_l2_norm(const Mesh& mesh, const BoundaryTrace& a);

/// Discrete elliptic operator for one (mesh, gamma) pair: assembles the
/// stiffness matrix, eliminates Dirichlet nodes, and caches the interior
/// factorization. Immutable after construction.
class EllipticSystem {
 public:
  EllipticSystem(const Mesh& mesh, Coefficient gamma, SolverOptions opts = {});

  const Mesh& mesh() const { return *mesh_; }
  const Coefficient& gamma() const { return gamma_; }
  const SparseMatrix& stiffness() const { return k_full_; }

  /// Dirichlet solve: u = f on the boundary, interior rows of K u = rhs.
  Field solve_dirichlet(const BoundaryTrace& f,
                        const std::vector<double>* rhs_volume = nullptr) const;

  /// Linearized problem: div(gamma_s grad v) + div(gamma' grad u) = 0,
  /// v = g on the boundary. k_prime is the stiffness of gamma' = gamma - gamma0.
  Field solve_linearized(const SparseMatrix& k_prime, const Field& u,
                         const BoundaryTrace& g) const;

  /// Adjoint problem with dipole source; returns the solution and the
  /// discrete dipole load it was solved against.
  std::pair<Field, std::vector<double>> solve_adjoint(const DipoleSpec& dipole) const;

  /// Variationally consistent Neumann trace: ([K u]_b - load_b) / m_b.
  BoundaryTrace conormal_flux(const Field& u, const std::vector<double>& load) const;

 private:
  Field lift_and_solve(const BoundaryTrace& bc,
                       const std::vector<double>* interior_extra) const;

  const Mesh* mesh_;
  Coefficient gamma_;
  SolverOptions opts_;
  SparseMatrix k_full_;
  SparseMatrix k_interior_;
  std::shared_ptr<Solver> interior_solver_;
  std::vector<double> lumped_boundary_mass_;
};

}  // namespace ebc
