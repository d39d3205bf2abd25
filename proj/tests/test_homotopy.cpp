#include "doctest.h"

#include "ebc/homotopy.hpp"
#include "ebc/verify.hpp"

#include <cmath>
#include <random>

using namespace ebc;

namespace {

Coefficient constant_coefficient(const Mesh& mesh, double value) {
  CoefficientExpr e;
  e.base = value;
  return evaluate(e, mesh);
}

Coefficient gaussian_coefficient(const Mesh& mesh, double amplitude = 0.5) {
  CoefficientExpr e;
  e.kind = CoefficientKind::gaussian_bumps;
  e.bumps = {{amplitude, {0.7, 0.3}, 20.0}};
  return evaluate(e, mesh);
}

BoundaryTrace coord_trace(const Mesh& mesh, int axis) {
  BoundaryTrace f;
  f.values.resize(mesh.boundary_count());
  for (int k = 0; k < mesh.boundary_count(); ++k) {
    f.values[k] = mesh.vertices[mesh.boundary_nodes[k]][axis];
  }
  return f;
}

ConstraintSpec single_spec(const Mesh& mesh, std::array<double, 2> p,
                           double threshold) {
  ConstraintSpec spec;
  spec.kind = ConstraintKind::single_gradient;
  spec.points = {locate(mesh, p)};
  spec.point_coords = {p};
  spec.threshold = threshold;
  return spec;
}

}  // namespace

TEST_CASE("stationary homotopy leaves the data unchanged") {
  const Mesh m = build_structured(16);
  const auto g = constant_coefficient(m, 1.0);
  const HomotopyProblem prob(m, g, g);
  const auto spec = single_spec(m, {0.5, 0.5}, 0.5);
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};

  const Trajectory traj = integrate(prob, f0, spec, {});
  REQUIRE(!traj.states.empty());
  CHECK(traj.states.back().s == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k < m.boundary_count(); ++k) {
    CHECK(traj.final_f[0].values[k] ==
          doctest::Approx(f0[0].values[k]).epsilon(1e-10));
  }
  for (const auto& st : traj.states) {
    CHECK(st.constraint_value == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("gaussian bump end-to-end with final verification") {
  const Mesh m = build_structured(32);
  const auto g0 = constant_coefficient(m, 1.0);
  const auto g1 = gaussian_coefficient(m);
  const HomotopyProblem prob(m, g0, g1);
  const auto spec = single_spec(m, {0.5, 0.5}, 0.9);
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};

  const Trajectory traj = integrate(prob, f0, spec, {});
  CHECK(traj.states.back().s == doctest::Approx(1.0).epsilon(1e-14));

  // constraint never drops below threshold minus the slack along the way
  for (const auto& st : traj.states) {
    CHECK(st.constraint_value >= spec.threshold - 1e-5);
  }

  const FinalReport rep = verify_final(m, g1, traj.final_f, spec, 1e-6);
  CHECK(rep.passed);
  CHECK(rep.constraint_value >= spec.threshold * (1.0 - 1e-6));
}

TEST_CASE("infeasible start raises with an empty partial trajectory") {
  const Mesh m = build_structured(16);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                             gaussian_coefficient(m));
  const auto spec = single_spec(m, {0.5, 0.5}, 100.0);  // |grad x1| = 1 << 100
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};
  CHECK_THROWS_AS(integrate(prob, f0, spec, {}), IntegrationError);
  try {
    integrate(prob, f0, spec, {});
  } catch (const IntegrationError& e) {
    CHECK(e.partial_trajectory.states.empty());
  }
}

TEST_CASE("unreachable min_step reports the partial trajectory") {
  const Mesh m = build_structured(16);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                             gaussian_coefficient(m, 3.0));
  // threshold within 1e-12 of the start value: every Euler step violates
  // the guard, so halving runs into min_step.
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};
  ConstraintSpec spec = single_spec(m, {0.5, 0.5}, 0.0);
  spec.threshold = constraint_value(prob, 0.0, f0, spec) * (1.0 - 1e-12);
  IntegratorOptions opts;
  opts.min_step = 1e-3;
  opts.slack_tolerance = 1e-15;

  bool threw = false;
  try {
    integrate(prob, f0, spec, opts);
  } catch (const IntegrationError& e) {
    threw = true;
    CHECK(!e.partial_trajectory.states.empty());
    CHECK(e.partial_trajectory.states.back().s < 1.0);
    CHECK(e.partial_trajectory.rejected_steps > 0);  // halving was exercised
  }
  CHECK(threw);
}

TEST_CASE("coarse steps stay monotone within the guard slack") {
  const Mesh m = build_structured(16);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                             gaussian_coefficient(m, 4.0));
  const auto spec = single_spec(m, {0.7, 0.3}, 0.9);
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};
  IntegratorOptions opts;
  opts.initial_step = 0.25;  // deliberately coarse
  opts.slack_tolerance = 1e-9;
  const Trajectory traj = integrate(prob, f0, spec, opts);
  CHECK(traj.states.back().s == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    CHECK(traj.states[i].constraint_value >=
          traj.states[i - 1].constraint_value - opts.slack_tolerance);
  }
}

TEST_CASE("rk4 integrates the same problem") {
  const Mesh m = build_structured(16);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                             gaussian_coefficient(m));
  const auto spec = single_spec(m, {0.5, 0.5}, 0.9);
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};
  IntegratorOptions opts;
  opts.method = IntegratorMethod::rk4;
  const Trajectory traj = integrate(prob, f0, spec, opts);
  CHECK(traj.states.back().s == doctest::Approx(1.0).epsilon(1e-14));
  const FinalReport rep =
      verify_final(m, prob.gamma1(), traj.final_f, spec, 1e-6);
  CHECK(rep.passed);
}

TEST_CASE("verify_final rejects perturbed data") {
  const Mesh m = build_structured(32);
  const auto g1 = gaussian_coefficient(m);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0), g1);
  const auto spec = single_spec(m, {0.5, 0.5}, 0.9);
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0)};
  const Trajectory traj = integrate(prob, f0, spec, {});

  std::vector<BoundaryTrace> damped = traj.final_f;
  for (auto& v : damped[0].values) v *= 0.5;  // halves the gradient too
  const FinalReport rep = verify_final(m, g1, damped, spec, 1e-6);
  CHECK(!rep.passed);
}

TEST_CASE("verify_final on the identity coefficient reports exactly the start") {
  const Mesh m = build_structured(16);
  const auto g = constant_coefficient(m, 1.0);
  const auto spec = single_spec(m, {0.5, 0.5}, 0.5);
  const FinalReport rep = verify_final(m, g, {coord_trace(m, 0)}, spec, 1e-6);
  CHECK(rep.passed);
  CHECK(rep.constraint_value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("trajectory is consistent between mesh refinements") {
  const auto run = [](int n) {
    const Mesh m = build_structured(n);
    const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                               gaussian_coefficient(m));
    const auto spec = single_spec(m, {0.5, 0.5}, 0.9);
    const Trajectory traj = integrate(prob, {coord_trace(m, 0)}, spec, {});
    return traj.states.back().constraint_value;
  };
  const double c16 = run(16);
  const double c32 = run(32);
  CHECK(std::abs(c16 - c32) <= 0.1);
}

TEST_CASE("multilinear determinant homotopy reaches s=1") {
  const Mesh m = build_structured(16);
  const HomotopyProblem prob(m, constant_coefficient(m, 1.0),
                             gaussian_coefficient(m));
  ConstraintSpec spec;
  spec.kind = ConstraintKind::multilinear;
  spec.points = {locate(m, {0.5, 0.5})};
  spec.form = MultilinearForm::determinant2d();
  spec.threshold = 0.9;
  const std::vector<BoundaryTrace> f0{coord_trace(m, 0), coord_trace(m, 1)};

  const Trajectory traj = integrate(prob, f0, spec, {});
  CHECK(traj.states.back().s == doctest::Approx(1.0).epsilon(1e-14));
  const FinalReport rep =
      verify_final(m, prob.gamma1(), traj.final_f, spec, 1e-6);
  CHECK(rep.passed);
}
