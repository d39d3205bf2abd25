#include "ebc/config.hpp"

#include <fstream>
#include <sstream>

namespace ebc {

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << "config line " << lineno << ": expected 'key = value', got '" << line
         << "'";
      throw ConfigError(os.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      std::ostringstream os;
      os << "config line " << lineno << ": empty key";
      throw ConfigError(os.str());
    }
    kv[key] = value;
  }
  return kv;
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  const int i = static_cast<int>(v);
  if (i != v) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      value + "'");
  }
  return i;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config key '" + key + "': expected true/false, got '" +
                    value + "'");
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  return out;
}

std::vector<std::string> parse_tokens(const std::string& value) {
  std::istringstream in(value);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto kv = parse_key_values(buf.str());
  if (kv.empty()) throw ConfigError("config file '" + path + "' is empty");

  RunConfig c;
  c.raw = kv;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (const auto* v = get("mesh.n_per_side")) c.n_per_side = parse_int("mesh.n_per_side", *v);
  if (c.n_per_side < 2) throw ConfigError("mesh.n_per_side must be >= 2");

  if (const auto* v = get("solver.method")) {
    if (*v == "direct") c.solver.method = SolveMethod::direct;
    else if (*v == "cg") c.solver.method = SolveMethod::cg;
    else if (*v == "auto") c.solver.method = SolveMethod::automatic;
    else throw ConfigError("solver.method: expected direct|cg|auto, got '" + *v + "'");
  }
  if (const auto* v = get("solver.tol")) c.solver.tol = parse_double("solver.tol", *v);

  if (const auto* v = get("coefficient.kind")) {
    if (*v == "constant") c.coefficient.kind = CoefficientKind::constant;
    else if (*v == "gaussian_bumps") c.coefficient.kind = CoefficientKind::gaussian_bumps;
    else if (*v == "sinusoidal") c.coefficient.kind = CoefficientKind::sinusoidal;
    else if (*v == "piecewise_smoothstep") c.coefficient.kind = CoefficientKind::piecewise_smoothstep;
    else throw ConfigError("coefficient.kind: unknown kind '" + *v + "'");
  }
  if (const auto* v = get("coefficient.base")) c.coefficient.base = parse_double("coefficient.base", *v);
  if (const auto* v = get("coefficient.bumps")) {
    const auto vals = parse_doubles("coefficient.bumps", *v);
    if (vals.empty() || vals.size() % 4 != 0) {
      throw ConfigError("coefficient.bumps: expected groups of 4 numbers "
                        "(amplitude cx cy decay)");
    }
    for (std::size_t i = 0; i < vals.size(); i += 4) {
      c.coefficient.bumps.push_back({vals[i], {vals[i + 1], vals[i + 2]}, vals[i + 3]});
    }
  }
  if (const auto* v = get("coefficient.amplitude")) c.coefficient.amplitude = parse_double("coefficient.amplitude", *v);
  if (const auto* v = get("coefficient.freq_x")) c.coefficient.freq_x = parse_double("coefficient.freq_x", *v);
  if (const auto* v = get("coefficient.freq_y")) c.coefficient.freq_y = parse_double("coefficient.freq_y", *v);
  if (const auto* v = get("coefficient.axis")) {
    if (*v == "x") c.coefficient.axis = 0;
    else if (*v == "y") c.coefficient.axis = 1;
    else throw ConfigError("coefficient.axis: expected x or y, got '" + *v + "'");
  }
  if (const auto* v = get("coefficient.center")) c.coefficient.center = parse_double("coefficient.center", *v);
  if (const auto* v = get("coefficient.width")) c.coefficient.width = parse_double("coefficient.width", *v);
  if (const auto* v = get("coefficient.bounds")) {
    const auto vals = parse_doubles("coefficient.bounds", *v);
    if (vals.size() != 2) throw ConfigError("coefficient.bounds: expected two numbers");
    c.coefficient.declared_bounds = {vals[0], vals[1]};
  }

  if (const auto* v = get("constraint.kind")) {
    if (*v == "single_gradient") c.constraint_kind = ConstraintKind::single_gradient;
    else if (*v == "multi_point") c.constraint_kind = ConstraintKind::multi_point;
    else if (*v == "multilinear") c.constraint_kind = ConstraintKind::multilinear;
    else throw ConfigError("constraint.kind: unknown kind '" + *v + "'");
  }
  if (const auto* v = get("constraint.points")) {
    const auto vals = parse_doubles("constraint.points", *v);
    if (vals.empty() || vals.size() % 2 != 0) {
      throw ConfigError("constraint.points: expected pairs of coordinates");
    }
    c.points.clear();
    for (std::size_t i = 0; i < vals.size(); i += 2) {
      c.points.push_back({vals[i], vals[i + 1]});
    }
  }
  if (const auto* v = get("constraint.threshold")) c.threshold = parse_double("constraint.threshold", *v);
  if (c.threshold <= 0.0) throw ConfigError("constraint.threshold must be positive");
  if (const auto* v = get("constraint.mu_clamp")) c.mu_clamp = parse_bool("constraint.mu_clamp", *v);
  if (const auto* v = get("constraint.form")) {
    if (*v != "determinant" && *v != "projection") {
      throw ConfigError("constraint.form: expected determinant|projection, got '" + *v + "'");
    }
    c.form_preset = *v;
  }

  if (const auto* v = get("integrator.method")) {
    if (*v == "euler") c.integrator.method = IntegratorMethod::euler;
    else if (*v == "rk4") c.integrator.method = IntegratorMethod::rk4;
    else throw ConfigError("integrator.method: expected euler|rk4, got '" + *v + "'");
  }
  if (const auto* v = get("integrator.initial_step")) c.integrator.initial_step = parse_double("integrator.initial_step", *v);
  if (const auto* v = get("integrator.min_step")) c.integrator.min_step = parse_double("integrator.min_step", *v);
  if (const auto* v = get("integrator.slack_tolerance")) c.integrator.slack_tolerance = parse_double("integrator.slack_tolerance", *v);

  if (const auto* v = get("output_dir")) c.output_dir = *v;
  if (const auto* v = get("seed")) c.seed = static_cast<std::uint64_t>(parse_int("seed", *v));

  if (const auto* v = get("sweep.parameter")) c.sweep_parameter = *v;
  if (const auto* v = get("sweep.values")) c.sweep_values = parse_tokens(*v);

  for (const auto& p : c.points) {
    if (!(p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0)) {
      std::ostringstream os;
      os << "constraint.points: point (" << p[0] << ", " << p[1]
         << ") must be strictly interior to the unit square";
      throw ConfigError(os.str());
    }
  }
  return c;
}

ConstraintSpec make_constraint_spec(const RunConfig& config, const Mesh& mesh) {
  ConstraintSpec spec;
  spec.kind = config.constraint_kind;
  spec.threshold = config.threshold;
  spec.mu_clamp = config.mu_clamp;
  spec.point_coords = config.points;
  for (const auto& p : config.points) {
    spec.points.push_back(locate(mesh, p));
  }
  if (spec.kind == ConstraintKind::multilinear) {
    spec.form = config.form_preset == "projection"
                    ? MultilinearForm::projection({1.0, 0.0})
                    : MultilinearForm::determinant2d();
  }
  return spec;
}

std::vector<BoundaryTrace> initial_traces(const RunConfig& config, const Mesh& mesh) {
  const int m = config.constraint_kind == ConstraintKind::multilinear
                    ? (config.form_preset == "projection" ? 1 : 2)
                    : 1;
  std::vector<BoundaryTrace> traces(m);
  for (int i = 0; i < m; ++i) {
    traces[i].values.resize(mesh.boundary_count());
    for (int k = 0; k < mesh.boundary_count(); ++k) {
      const auto& p = mesh.vertices[mesh.boundary_nodes[k]];
      traces[i].values[k] = p[i % 2];  // x1, then x2, cycled
    }
  }
  return traces;
}

}  // namespace ebc
