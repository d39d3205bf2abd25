#include "ebc/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "ebc/config.hpp"
#include "ebc/io.hpp"
#include "ebc/verify.hpp"

#include "json.hpp"

namespace ebc {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

struct Setup {
  RunConfig config;
  Mesh mesh;
  Coefficient gamma0;
  Coefficient gamma;
  ConstraintSpec spec;
  std::vector<BoundaryTrace> f0;
};

Setup build_setup(const std::string& config_path) {
  Setup s;
  s.config = parse_run_config(config_path);
  s.mesh = build_structured(s.config.n_per_side);
  CoefficientExpr unit;
  unit.kind = CoefficientKind::constant;
  unit.base = 1.0;
  s.gamma0 = evaluate(unit, s.mesh);
  s.gamma = evaluate(s.config.coefficient, s.mesh);
  s.spec = make_constraint_spec(s.config, s.mesh);
  s.f0 = initial_traces(s.config, s.mesh);
  return s;
}

double effective_slack(const RunConfig& config) {
  return config.integrator.slack_tolerance >= 0.0
             ? config.integrator.slack_tolerance
             : 1e-6 * config.threshold;
}

json base_summary(const Setup& s, const std::string& stage) {
  json j;
  j["format_version"] = kFormatVersion;
  j["stage"] = stage;
  j["mesh"] = {{"n_per_side", s.config.n_per_side}};
  j["coefficient"] = s.config.coefficient.describe();
  j["seed"] = s.config.seed;
  j["config"] = s.config.raw;
  return j;
}

void write_json(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string out_path(const Setup& s, const std::string& name) {
  return (std::filesystem::path(s.config.output_dir) / name).string();
}

void write_field_dumps(const Setup& s, const HomotopyProblem& prob,
                       const Trajectory& traj) {
  // dumps at s in {0, 0.5, 1}: the recorded trace closest to each
  const std::array<double, 3> targets{0.0, 0.5, 1.0};
  const std::array<const char*, 3> names{"field_s0.txt", "field_s0.5.txt",
                                         "field_s1.txt"};
  for (int i = 0; i < 3; ++i) {
    const HomotopyState* best = nullptr;
    for (const auto& st : traj.states) {
      if (!best || std::abs(st.s - targets[i]) < std::abs(best->s - targets[i])) {
        best = &st;
      }
    }
    if (!best) continue;
    const EllipticSystem sys = prob.system_at(best->s);
    const Field u = sys.solve_dirichlet(best->f[0]);
    write_text_file(out_path(s, std::string("fields/") + names[i]),
                    field_table(s.mesh, u));
  }
}

}  // namespace

int cmd_synthesize(const std::string& config_path) {
  Setup s;
  try {
    s = build_setup(config_path);
  } catch (const std::exception& e) {
    std::cerr << "synthesize: " << e.what() << "\n";
    return 1;
  }

  HomotopyProblem prob(s.mesh, s.gamma0, s.gamma, s.config.solver);
  Trajectory traj;
  try {
    traj = integrate(prob, s.f0, s.spec, s.config.integrator);
  } catch (const IntegrationError& e) {
    // no accepted state at all means the initial data already violated the
    // constraint: that is a constraint failure, not an integrator one
    const bool infeasible_start = e.partial_trajectory.states.empty();
    write_text_file(out_path(s, "trajectory.csv"),
                    trajectory_csv(e.partial_trajectory));
    json j = base_summary(s, infeasible_start ? "feasibility" : "integrate");
    j["error"] = e.what();
    j["accepted_steps"] = e.partial_trajectory.accepted_steps;
    j["rejected_steps"] = e.partial_trajectory.rejected_steps;
    write_json(out_path(s, "summary.json"), j);
    std::cerr << "synthesize: " << e.what() << "\n";
    return infeasible_start ? 2 : 3;
  }

  const FinalReport report = verify_final(s.mesh, s.gamma, traj.final_f, s.spec,
                                          effective_slack(s.config), s.config.solver);

  write_text_file(out_path(s, "trajectory.csv"), trajectory_csv(traj));
  write_text_file(out_path(s, "final_trace.txt"), trace_table(s.mesh, traj.final_f));
  write_field_dumps(s, prob, traj);

  json j = base_summary(s, "verify_final");
  j["accepted_steps"] = traj.accepted_steps;
  j["rejected_steps"] = traj.rejected_steps;
  j["final_constraint_value"] = report.constraint_value;
  j["threshold"] = report.threshold;
  j["slack"] = report.slack;
  j["passed"] = report.passed;
  write_json(out_path(s, "summary.json"), j);

  return report.passed ? 0 : 2;
}

int cmd_certify(const std::string& config_path) {
  Setup s;
  try {
    s = build_setup(config_path);
  } catch (const std::exception& e) {
    std::cerr << "certify: " << e.what() << "\n";
    return 1;
  }

  HomotopyProblem prob(s.mesh, s.gamma0, s.gamma, s.config.solver);
  const std::vector<double> s_samples{0.0, 0.5, 1.0};
  const PointLocation& point = s.spec.points.at(0);

  ConstraintSpec single = s.spec;
  single.kind = ConstraintKind::single_gradient;

  std::vector<CertificateReport> reports;
  for (double sv : s_samples) {
    reports.push_back(certify_duality(prob, sv, point, 20, s.config.seed));
    BoundaryTrace f = s.f0[0];
    reports.push_back(
        certify_kkt_optimality(prob, sv, f, single, 20, s.config.seed));
  }
  reports.push_back(certify_injectivity_constants(prob, s_samples, point, 16));
  reports.push_back(
      certify_lipschitz_bound(prob, s_samples, single, 7, 0.5, s.config.seed));

  json aggregate;
  aggregate["format_version"] = kFormatVersion;
  aggregate["stage"] = "certify";
  bool all_passed = true;
  int idx = 0;
  for (const auto& r : reports) {
    std::ostringstream name;
    name << "certificates/" << idx++ << "_" << r.name << ".json";
    write_json(out_path(s, name.str()), to_json(r));
    aggregate["certificates"].push_back(
        {{"name", r.name}, {"passed", r.passed}, {"file", name.str()}});
    if (!r.passed) {
      all_passed = false;
      aggregate["failed"].push_back(r.name);
    }
  }
  aggregate["all_passed"] = all_passed;
  write_json(out_path(s, "certificates/aggregate.json"), aggregate);
  return all_passed ? 0 : 2;
}

int cmd_compare_naive(const std::string& config_path) {
  Setup s;
  try {
    s = build_setup(config_path);
  } catch (const std::exception& e) {
    std::cerr << "compare-naive: " << e.what() << "\n";
    return 1;
  }

  HomotopyProblem prob(s.mesh, s.gamma0, s.gamma, s.config.solver);
  ConstraintSpec single = s.spec;
  single.kind = ConstraintKind::single_gradient;

  Trajectory traj;
  try {
    traj = integrate(prob, {s.f0[0]}, single, s.config.integrator);
  } catch (const IntegrationError& e) {
    json j = base_summary(s, "integrate");
    j["error"] = e.what();
    write_json(out_path(s, "summary.json"), j);
    std::cerr << "compare-naive: optimal scheme failed: " << e.what() << "\n";
    return 3;
  }

  std::ostringstream csv;
  csv << "s,phi,phi_prime,optimal_g_norm,optimal_constraint\n";
  double phi = 1.0;
  bool naive_failed = false;
  std::string naive_error;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& st = traj.states[k];
    double phi_prime = 0.0;
    try {
      phi_prime = naive_scaling_step(prob, st.s, phi, s.f0[0], single.points[0]);
    } catch (const std::exception& e) {
      naive_failed = true;
      naive_error = e.what();
      break;
    }
    csv << format_g17(st.s) << "," << format_g17(phi) << ","
        << format_g17(phi_prime) << "," << format_g17(st.g_norm) << ","
        << format_g17(st.constraint_value) << "\n";
    if (k + 1 < traj.states.size()) {
      phi += (traj.states[k + 1].s - st.s) * phi_prime;
    }
  }
  write_text_file(out_path(s, "comparison.csv"), csv.str());

  json j = base_summary(s, "compare_naive");
  j["optimal_completed"] = true;
  j["naive_completed"] = !naive_failed;
  if (naive_failed) j["naive_error"] = naive_error;
  j["final_phi"] = phi;
  write_json(out_path(s, "summary.json"), j);
  return naive_failed ? 4 : 0;
}

int cmd_sweep(const std::string& config_path, int jobs) {
  RunConfig config;
  try {
    config = parse_run_config(config_path);
    if (config.sweep_parameter.empty() || config.sweep_values.empty()) {
      throw ConfigError("sweep requires sweep.parameter and sweep.values");
    }
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return 1;
  }

  const int n = static_cast<int>(config.sweep_values.size());
  std::vector<int> codes(n, -1);
  std::vector<std::string> entry_dirs(n);

  auto run_entry = [&](int i) {
    auto kv = config.raw;
    kv[config.sweep_parameter] = config.sweep_values[i];
    std::ostringstream dir;
    dir << config.output_dir << "/sweep_" << i;
    entry_dirs[i] = dir.str();
    kv["output_dir"] = entry_dirs[i];
    kv.erase("sweep.parameter");
    kv.erase("sweep.values");
    std::ostringstream text;
    for (const auto& [key, value] : kv) text << key << " = " << value << "\n";
    const std::string entry_config = entry_dirs[i] + "/config.txt";
    write_text_file(entry_config, text.str());
    codes[i] = cmd_synthesize(entry_config);
  };

  if (jobs <= 1) {
    for (int i = 0; i < n; ++i) run_entry(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < std::min(jobs, n); ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          run_entry(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  json j;
  j["format_version"] = kFormatVersion;
  j["stage"] = "sweep";
  j["parameter"] = config.sweep_parameter;
  int worst = 0;
  for (int i = 0; i < n; ++i) {
    j["entries"].push_back({{"value", config.sweep_values[i]},
                            {"dir", entry_dirs[i]},
                            {"exit_code", codes[i]}});
    worst = std::max(worst, codes[i]);
  }
  write_json((std::filesystem::path(config.output_dir) / "sweep_summary.json").string(), j);
  return worst;
}

}  // namespace ebc
