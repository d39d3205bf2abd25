#include "CLI11.hpp"

#include "ebc/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Boundary-control synthesis for elliptic gradient constraints"};
  app.require_subcommand(1);

  std::string config_path;
  int jobs = 1;

  auto* synth = app.add_subcommand("synthesize",
                                   "Run the homotopy and write the trajectory");
  synth->add_option("config", config_path, "run config file")->required();

  auto* certify = app.add_subcommand("certify", "Run the certificate suite");
  certify->add_option("config", config_path, "run config file")->required();

  auto* compare = app.add_subcommand("compare-naive",
                                     "Optimal scheme vs the scaling baseline");
  compare->add_option("config", config_path, "run config file")->required();

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep of synthesize runs");
  sweep->add_option("config", config_path, "run config file")->required();
  sweep->add_option("--jobs", jobs, "parallel sweep entries");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) return ebc::cmd_synthesize(config_path);
  if (certify->parsed()) return ebc::cmd_certify(config_path);
  if (compare->parsed()) return ebc::cmd_compare_naive(config_path);
  if (sweep->parsed()) return ebc::cmd_sweep(config_path, jobs);
  return 1;
}
