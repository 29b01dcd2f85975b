// Batch runner: gradsys run CONFIG | gradsys sweep CONFIG

#include <CLI11.hpp>
#include <iostream>

#include "gradsys/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fixed-point, threshold and bi-Laplacian experiments for the gradient elliptic system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool verbose = false;
  app.add_option("--out", out_dir, "Output directory (overrides out_dir in the config)");
  app.add_flag("-v,--verbose", verbose, "Progress messages on stderr");

  auto* run = app.add_subcommand("run", "Run the experiment described by CONFIG");
  run->add_option("config", config_path, "Config file")->required();
  auto* sweep = app.add_subcommand("sweep", "Verdict map over the [sweep] section of CONFIG");
  sweep->add_option("config", config_path, "Config file")->required();
  for (auto* sub : {run, sweep}) {
    sub->add_option("--out", out_dir, "Output directory (overrides out_dir in the config)");
    sub->add_flag("-v,--verbose", verbose, "Progress messages on stderr");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gradsys::kExitError;
  }

  gradsys::RunOptions options;
  if (!out_dir.empty()) options.out_dir = out_dir;
  options.verbose = verbose;
  return gradsys::run_command(run->parsed() ? "run" : "sweep", config_path, options);
}
