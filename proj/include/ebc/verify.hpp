#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ebc/control.hpp"

#include "json.hpp"

namespace ebc {

struct CertificateReport {
  std::string name;
  bool passed = false;
  std::map<std::string, double> measured;
  double tolerance = 0.0;
  nlohmann::json context;
};

nlohmann::json to_json(const CertificateReport& report);

/// Smooth random boundary data: truncated Fourier series in the loop
/// parameter, 8 modes, coefficients N(0,1)/(1+k^2).
BoundaryTrace random_boundary_trace(const Mesh& mesh, std::mt19937_64& rng);

/// Both routes to grad u(x_hat) . grad v^g(x_hat): the direct linearized
/// solve and the adjoint volume/boundary formula. Passes if the max
/// relative discrepancy over random (f, g) pairs stays within tolerance.
CertificateReport certify_duality(const HomotopyProblem& prob, double s,
                                  const PointLocation& point, int trials,
                                  std::uint64_t seed, double tolerance = 1e-8);

/// Flux-norm comparability over unit dipole directions and s samples;
/// discrete L2 surrogates replace the Holder norms.
CertificateReport certify_injectivity_constants(const HomotopyProblem& prob,
                                                const std::vector<double>& s_samples,
                                                const PointLocation& point,
                                                int directions);

/// Control output against the closed-form half-space projection and
/// random feasible competitors; includes complementary slackness.
CertificateReport certify_kkt_optimality(const HomotopyProblem& prob, double s,
                                         const BoundaryTrace& f,
                                         const ConstraintSpec& spec,
                                         int oracle_trials, std::uint64_t seed);

/// Empirical kappa for |F(f,s)| <= kappa |f| and the Lipschitz-style
/// difference quotient over random feasible pairs.
CertificateReport certify_lipschitz_bound(const HomotopyProblem& prob,
                                          const std::vector<double>& s_samples,
                                          const ConstraintSpec& spec, int f_pairs,
                                          double eta, std::uint64_t seed);

}  // namespace ebc
