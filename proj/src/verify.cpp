#include "ebc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ebc {

nlohmann::json to_json(const CertificateReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["passed"] = report.passed;
  j["tolerance"] = report.tolerance;
  j["measured"] = report.measured;
  j["context"] = report.context;
  return j;
}

BoundaryTrace random_boundary_trace(const Mesh& mesh, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int modes = 8;
  std::array<double, modes> ak, bk;
  for (int k = 0; k < modes; ++k) {
    ak[k] = normal(rng);
    bk[k] = normal(rng);
  }
  const auto t = boundary_loop_parameter(mesh);
  BoundaryTrace trace;
  trace.values.resize(mesh.boundary_count());
  for (int b = 0; b < mesh.boundary_count(); ++b) {
    const double theta = 2.0 * std::numbers::pi * t[b] / 4.0;
    double v = 0.0;
    for (int k = 1; k <= modes; ++k) {
      const double w = 1.0 / (1.0 + k * k);
      v += w * (ak[k - 1] * std::cos(k * theta) + bk[k - 1] * std::sin(k * theta));
    }
    trace.values[b] = v;
  }
  return trace;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

BoundaryTrace linear_trace(const Mesh& mesh, double cx, double cy, double c0 = 0.0) {
  BoundaryTrace f;
  f.values.resize(mesh.boundary_count());
  for (int k = 0; k < mesh.boundary_count(); ++k) {
    const auto& p = mesh.vertices[mesh.boundary_nodes[k]];
    f.values[k] = cx * p[0] + cy * p[1] + c0;
  }
  return f;
}

BoundaryTrace trace_diff(const BoundaryTrace& a, const BoundaryTrace& b) {
  BoundaryTrace d = a;
  for (std::size_t k = 0; k < d.values.size(); ++k) d.values[k] -= b.values[k];
  return d;
}

/// Discrete L2(X) norm with lumped mass.
double field_l2_norm(const Mesh& mesh, const Field& u) {
  std::vector<double> mass(mesh.node_count(), 0.0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const double third = triangle_area(mesh, t) / 3.0;
    for (int k : mesh.triangles[t]) mass[k] += third;
  }
  double acc = 0.0;
  for (int v = 0; v < mesh.node_count(); ++v) {
    acc += mass[v] * u.nodal_values[v] * u.nodal_values[v];
  }
  return std::sqrt(acc);
}

}  // namespace

CertificateReport certify_duality(const HomotopyProblem& prob, double s,
                                  const PointLocation& point, int trials,
                                  std::uint64_t seed, double tolerance) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  std::mt19937_64 rng(seed);

  double max_rel = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    BoundaryTrace f = random_boundary_trace(mesh, rng);
    // keep gradients well away from zero
    const BoundaryTrace base = linear_trace(mesh, 1.0, 0.0);
    for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] += base.values[k];
    const BoundaryTrace g = random_boundary_trace(mesh, rng);

    const Field u = sys.solve_dirichlet(f);
    const auto y = gradient_at(mesh, u, point);
    auto [lam, load] = sys.solve_adjoint({point, y});
    const BoundaryTrace flux = sys.conormal_flux(lam, load);

    const Field v = sys.solve_linearized(prob.k_prime(), u, g);
    const auto gv = gradient_at(mesh, v, point);
    const double direct = y[0] * gv[0] + y[1] * gv[1];

    const double vol = -dot(lam.nodal_values, matvec(prob.k_prime(), u.nodal_values));
    const double bnd = boundary_l2_inner(mesh, flux, g);
    const double adjoint = vol - bnd;

    const double scale = std::max({std::abs(direct), std::abs(adjoint),
                                   std::abs(vol), std::abs(bnd), 1e-300});
    max_rel = std::max(max_rel, std::abs(direct - adjoint) / scale);
  }

  CertificateReport report;
  report.name = "duality";
  report.tolerance = tolerance;
  report.measured["max_relative_discrepancy"] = max_rel;
  report.passed = max_rel <= tolerance;
  report.context = {{"s", s},
                    {"trials", trials},
                    {"seed", seed},
                    {"n_per_side", mesh.n_per_side},
                    {"norms", "discrete L2 surrogates"}};
  return report;
}

CertificateReport certify_injectivity_constants(const HomotopyProblem& prob,
                                                const std::vector<double>& s_samples,
                                                const PointLocation& point,
                                                int directions) {
  const Mesh& mesh = prob.mesh();
  double rho_hat = std::numeric_limits<double>::infinity();
  double eta_hat = 0.0;
  double lambda_norm_max = 0.0;
  double linearity_err = 0.0;
  double zero_flux_norm = 0.0;

  for (double s : s_samples) {
    const EllipticSystem sys = prob.system_at(s);
    {
      auto [lam0, load0] = sys.solve_adjoint({point, {0.0, 0.0}});
      zero_flux_norm = std::max(
          zero_flux_norm, boundary_l2_norm(mesh, sys.conormal_flux(lam0, load0)));
    }
    for (int d = 0; d < directions; ++d) {
      const double ang = 2.0 * std::numbers::pi * d / directions;
      const std::array<double, 2> y{std::cos(ang), std::sin(ang)};
      auto [lam, load] = sys.solve_adjoint({point, y});
      const BoundaryTrace flux = sys.conormal_flux(lam, load);
      const double fn = boundary_l2_norm(mesh, flux);
      rho_hat = std::min(rho_hat, fn);
      eta_hat = std::max(eta_hat, fn);
      lambda_norm_max = std::max(lambda_norm_max, field_l2_norm(mesh, lam));

      // flux is linear in y
      auto [lam2, load2] = sys.solve_adjoint({point, {2.0 * y[0], 2.0 * y[1]}});
      const BoundaryTrace flux2 = sys.conormal_flux(lam2, load2);
      BoundaryTrace residual = flux2;
      for (std::size_t k = 0; k < residual.values.size(); ++k) {
        residual.values[k] -= 2.0 * flux.values[k];
      }
      linearity_err = std::max(
          linearity_err, boundary_l2_norm(mesh, residual) / std::max(fn, 1e-300));
    }
  }

  CertificateReport report;
  report.name = "injectivity_constants";
  report.tolerance = 1e-8;
  report.measured["rho_hat"] = rho_hat;
  report.measured["eta_hat"] = eta_hat;
  report.measured["lambda_l2_max"] = lambda_norm_max;
  report.measured["linearity_error"] = linearity_err;
  report.measured["zero_direction_flux_norm"] = zero_flux_norm;
  report.passed = rho_hat > 0.0 && rho_hat >= 1e-8 * eta_hat &&
                  linearity_err <= 1e-12 && zero_flux_norm <= 1e-12;
  report.context = {{"s_samples", s_samples},
                    {"directions", directions},
                    {"n_per_side", mesh.n_per_side},
                    {"norms", "discrete L2 surrogates for Holder norms"}};
  return report;
}

CertificateReport certify_kkt_optimality(const HomotopyProblem& prob, double s,
                                         const BoundaryTrace& f,
                                         const ConstraintSpec& spec,
                                         int oracle_trials, std::uint64_t seed) {
  const Mesh& mesh = prob.mesh();
  const EllipticSystem sys = prob.system_at(s);
  const PointLocation& point = spec.points.at(0);

  const ControlOutput ctrl = control_functional(prob, s, f, spec);

  // Independent half-space data: a = flux under the boundary inner product,
  // b = volume term; feasibility reads <a, g> <= b.
  const Field u = sys.solve_dirichlet(f);
  const auto y = gradient_at(mesh, u, point);
  auto [lam, load] = sys.solve_adjoint({point, y});
  const BoundaryTrace a = sys.conormal_flux(lam, load);
  const double aa = boundary_l2_inner(mesh, a, a);
  const double b = -dot(lam.nodal_values, matvec(prob.k_prime(), u.nodal_values));

  // Closed-form minimal-norm element of {g : <a,g> <= b}.
  BoundaryTrace oracle;
  oracle.values.assign(mesh.boundary_count(), 0.0);
  if (b < 0.0) {
    const double coef = b / aa;
    for (int k = 0; k < mesh.boundary_count(); ++k) {
      oracle.values[k] = coef * a.values[k];
    }
  }
  const double oracle_norm = boundary_l2_norm(mesh, oracle);
  const double mismatch = boundary_l2_norm(mesh, trace_diff(ctrl.g[0], oracle));

  // Complementary slackness: mu_tilde * (grad u . grad v^F) = 0.
  const Field vF = sys.solve_linearized(prob.k_prime(), u, ctrl.g[0]);
  const auto gvF = gradient_at(mesh, vF, point);
  const double inner = y[0] * gvF[0] + y[1] * gvF[1];
  const double mu_tilde = std::min(0.0, ctrl.mu);
  const double y_norm_sq = y[0] * y[0] + y[1] * y[1];
  const double slackness =
      std::abs(mu_tilde * inner) / std::max(y_norm_sq, 1e-300);

  // Random feasible competitors never beat the control in norm.
  std::mt19937_64 rng(seed);
  const double f_norm = boundary_l2_norm(mesh, ctrl.g[0]);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < oracle_trials; ++trial) {
    BoundaryTrace g = random_boundary_trace(mesh, rng);
    const double c = boundary_l2_inner(mesh, a, g);
    if (c > b) {  // project onto the feasible half-space
      const double corr = (c - b) / aa;
      for (int k = 0; k < mesh.boundary_count(); ++k) {
        g.values[k] -= corr * a.values[k];
      }
    }
    worst_margin = std::min(worst_margin, boundary_l2_norm(mesh, g) - f_norm);
  }

  CertificateReport report;
  report.name = "kkt_optimality";
  report.tolerance = 1e-9;
  report.measured["projection_mismatch"] = mismatch;
  report.measured["oracle_norm"] = oracle_norm;
  report.measured["control_norm"] = f_norm;
  report.measured["complementary_slackness"] = slackness;
  report.measured["worst_competitor_margin"] = worst_margin;
  report.passed = mismatch <= 1e-9 * std::max(1.0, oracle_norm) &&
                  slackness <= 1e-9 && worst_margin >= -1e-9;
  report.context = {{"s", s},
                    {"oracle_trials", oracle_trials},
                    {"seed", seed},
                    {"n_per_side", mesh.n_per_side}};
  return report;
}

CertificateReport certify_lipschitz_bound(const HomotopyProblem& prob,
                                          const std::vector<double>& s_samples,
                                          const ConstraintSpec& spec, int f_pairs,
                                          double eta, std::uint64_t seed) {
  const Mesh& mesh = prob.mesh();
  std::mt19937_64 rng(seed);

  auto feasible_sample = [&](double s) {
    // start from the linear trace and shrink the perturbation until the
    // constraint stays above eta, mirroring the N_{eta,s} sets
    const BoundaryTrace base = linear_trace(mesh, 1.0, 0.0);
    double amp = 0.4;
    for (int attempt = 0; attempt < 6; ++attempt) {
      BoundaryTrace f = random_boundary_trace(mesh, rng);
      for (std::size_t k = 0; k < f.values.size(); ++k) {
        f.values[k] = base.values[k] + amp * f.values[k];
      }
      if (constraint_value(prob, s, {f}, spec) > eta) return f;
      amp *= 0.5;
    }
    return base;
  };

  double kappa_bound = 0.0;
  double kappa_lip = 0.0;
  for (double s : s_samples) {
    for (int pair = 0; pair < f_pairs; ++pair) {
      const BoundaryTrace f1 = feasible_sample(s);
      const BoundaryTrace f2 = feasible_sample(s);
      const ControlOutput c1 = control_functional(prob, s, f1, spec);
      const ControlOutput c2 = control_functional(prob, s, f2, spec);
      const double n1 = boundary_l2_norm(mesh, f1);
      const double n2 = boundary_l2_norm(mesh, f2);
      kappa_bound = std::max(kappa_bound, c1.g_l2_norm / n1);
      kappa_bound = std::max(kappa_bound, c2.g_l2_norm / n2);
      const double df = boundary_l2_norm(mesh, trace_diff(f1, f2));
      if (df > 1e-12) {
        const double dF = boundary_l2_norm(mesh, trace_diff(c1.g[0], c2.g[0]));
        kappa_lip = std::max(kappa_lip, dF / ((1.0 + n1 + n2) * df));
      }
    }
  }

  CertificateReport report;
  report.name = "lipschitz_bound";
  report.tolerance = 1e3;
  report.measured["kappa_bound"] = kappa_bound;
  report.measured["kappa_lipschitz"] = kappa_lip;
  report.passed = std::isfinite(kappa_bound) && std::isfinite(kappa_lip) &&
                  kappa_bound <= 1e3;
  report.context = {{"s_samples", s_samples},
                    {"f_pairs", f_pairs},
                    {"eta", eta},
                    {"seed", seed},
                    {"n_per_side", mesh.n_per_side},
                    {"norms", "discrete L2 surrogates for Holder norms"}};
  return report;
}

}  // namespace ebc
