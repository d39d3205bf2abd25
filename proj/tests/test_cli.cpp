#include "doctest.h"

#include "ebc/commands.hpp"
#include "ebc/config.hpp"
#include "ebc/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace ebc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "ebc_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "run.cfg";
  std::ofstream out(path);
  out << body;
  return path;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string standard_config(const fs::path& out_dir) {
  std::ostringstream cfg;
  cfg << "mesh.n_per_side = 16\n"
      << "coefficient.kind = gaussian_bumps\n"
      << "coefficient.base = 1.0\n"
      << "coefficient.bumps = 0.5 0.7 0.3 20.0\n"
      << "constraint.kind = single_gradient\n"
      << "constraint.points = 0.5 0.5\n"
      << "constraint.threshold = 0.9\n"
      << "output_dir = " << out_dir.string() << "\n";
  return cfg.str();
}

}  // namespace

TEST_CASE("key-value parser basics and diagnostics") {
  const auto kv = parse_key_values("a.b = 1\n# comment\n c = hello world # tail\n");
  CHECK(kv.at("a.b") == "1");
  CHECK(kv.at("c") == "hello world");
  CHECK_THROWS_AS(parse_key_values("not a pair\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("= 3\n"), ConfigError);
  try {
    parse_key_values("ok = 1\nbroken line\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("run config parsing, defaults, and validation") {
  const fs::path dir = scratch_dir("config_parse");
  const auto path = write_config(dir,
                                 "mesh.n_per_side = 24\n"
                                 "constraint.threshold = 0.5\n"
                                 "seed = 7\n");
  const RunConfig c = parse_run_config(path.string());
  CHECK(c.n_per_side == 24);
  CHECK(c.threshold == 0.5);
  CHECK(c.seed == 7);
  CHECK(c.points.size() == 1);  // default center point
  CHECK(c.integrator.initial_step == 1.0 / 64.0);

  CHECK_THROWS_AS(parse_run_config((dir / "missing.cfg").string()), ConfigError);
  const auto empty = write_config(dir, "\n# only comments\n");
  CHECK_THROWS_AS(parse_run_config(empty.string()), ConfigError);

  const auto bad_point = write_config(dir, "constraint.points = 1.0 0.5\n");
  try {
    parse_run_config(bad_point.string());
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("(1, 0.5)") != std::string::npos);
  }
}

TEST_CASE("format_g17 round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 12345.678901234567, -2.5e300}) {
    const std::string s = format_g17(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_g17(1.0) == "1");
}

TEST_CASE("synthesize writes the full artifact set") {
  const fs::path dir = scratch_dir("synthesize_run");
  const fs::path out = dir / "out";
  const auto cfg = write_config(dir, standard_config(out));
  CHECK(cmd_synthesize(cfg.string()) == 0);

  CHECK(fs::exists(out / "trajectory.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "final_trace.txt"));
  CHECK(fs::exists(out / "fields" / "field_s0.txt"));
  CHECK(fs::exists(out / "fields" / "field_s0.5.txt"));
  CHECK(fs::exists(out / "fields" / "field_s1.txt"));

  const std::string csv = read_file(out / "trajectory.csv");
  CHECK(csv.rfind("s,constraint_value,mu,g_l2_norm,step_size,branch", 0) == 0);

  const std::string summary = read_file(out / "summary.json");
  CHECK(summary.find("\"format_version\"") != std::string::npos);
  CHECK(summary.find("\"final_constraint_value\"") != std::string::npos);
}

TEST_CASE("synthesize exit code 1 on config errors") {
  const fs::path dir = scratch_dir("synthesize_bad");
  const auto cfg = write_config(dir, "mesh.n_per_side = 1\n");
  CHECK(cmd_synthesize(cfg.string()) == 1);
  CHECK(cmd_synthesize((dir / "nope.cfg").string()) == 1);
}

TEST_CASE("synthesize exit code 2 on an infeasible start") {
  const fs::path dir = scratch_dir("synthesize_infeasible");
  const fs::path out = dir / "out";
  std::string body = standard_config(out);
  body += "constraint.threshold = 50\n";  // |grad x1| = 1, unreachable
  const auto cfg = write_config(dir, body);
  CHECK(cmd_synthesize(cfg.string()) == 2);
}

TEST_CASE("reruns are byte-identical") {
  const fs::path dir = scratch_dir("determinism");
  const fs::path out1 = dir / "a";
  const fs::path out2 = dir / "b";
  const auto cfg1 = write_config(dir, standard_config(out1));
  CHECK(cmd_synthesize(cfg1.string()) == 0);
  const auto cfg2 = write_config(dir, standard_config(out2));
  CHECK(cmd_synthesize(cfg2.string()) == 0);
  CHECK(read_file(out1 / "trajectory.csv") == read_file(out2 / "trajectory.csv"));
  CHECK(read_file(out1 / "final_trace.txt") == read_file(out2 / "final_trace.txt"));
}

TEST_CASE("certify writes certificates and an aggregate") {
  const fs::path dir = scratch_dir("certify_run");
  const fs::path out = dir / "out";
  const auto cfg = write_config(dir, standard_config(out));
  CHECK(cmd_certify(cfg.string()) == 0);
  CHECK(fs::exists(out / "certificates" / "aggregate.json"));
  int count = 0;
  for (const auto& entry : fs::directory_iterator(out / "certificates")) {
    if (entry.path().extension() == ".json") ++count;
  }
  CHECK(count >= 4);  // duality x3 stages collapse into files + aggregate
}

TEST_CASE("compare-naive writes the comparison table") {
  const fs::path dir = scratch_dir("compare_run");
  const fs::path out = dir / "out";
  const auto cfg = write_config(dir, standard_config(out));
  const int code = cmd_compare_naive(cfg.string());
  CHECK((code == 0 || code == 4));
  CHECK(fs::exists(out / "comparison.csv"));
  const std::string csv = read_file(out / "comparison.csv");
  CHECK(csv.rfind("s,phi,phi_prime,optimal_g_norm,optimal_constraint", 0) == 0);
}

TEST_CASE("sweep runs one subdirectory per value") {
  const fs::path dir = scratch_dir("sweep_run");
  const fs::path out = dir / "out";
  std::string body = standard_config(out);
  body += "sweep.parameter = constraint.threshold\n";
  body += "sweep.values = 0.5 0.9\n";
  const auto cfg = write_config(dir, body);
  CHECK(cmd_sweep(cfg.string()) == 0);
  CHECK(fs::exists(out / "sweep_0" / "trajectory.csv"));
  CHECK(fs::exists(out / "sweep_1" / "trajectory.csv"));
  CHECK(fs::exists(out / "sweep_summary.json"));
}

TEST_CASE("installed binary handles subcommands end to end") {
  const fs::path dir = scratch_dir("binary_run");
  const fs::path out = dir / "out";
  const auto cfg = write_config(dir, standard_config(out));
  std::ostringstream cmd;
  cmd << EBC_CLI_PATH << " synthesize " << cfg << " > " << (dir / "log.txt");
  const int rc = std::system(cmd.str().c_str());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "trajectory.csv"));

  const int help = std::system((std::string(EBC_CLI_PATH) + " --help > /dev/null").c_str());
  CHECK(help == 0);
}
