#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "mfvar.h"

int main(int argc, char** argv) {
  CLI::App app{"Mixed-frequency steady-state BVAR"};
  app.require_subcommand(1);

  std::string config, output = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  for (auto* sub : {app.add_subcommand("simulate", "Generate a synthetic dataset"),
                    app.add_subcommand("estimate", "Run the Gibbs sampler"),
                    app.add_subcommand("forecast", "Estimate and simulate predictives"),
                    app.add_subcommand("evaluate", "Expanding-window forecast comparison")}) {
    sub->add_option("--config", config, "Configuration file")->required();
    sub->add_option("--output", output, "Output directory");
    sub->add_option("--seed", seed, "Override the configured seed (0 = keep)");
    if (sub->get_name() != "simulate")
      sub->add_option("--jobs", jobs, "Models to run in parallel");
  }

  CLI11_PARSE(app, argc, argv);

  char err[512] = {0};
  int rc = MFV_OK;
  if (app.got_subcommand("simulate"))
    rc = mfv_simulate(config.c_str(), output.c_str(), seed, err, sizeof err);
  else if (app.got_subcommand("estimate"))
    rc = mfv_estimate(config.c_str(), output.c_str(), seed, jobs, err, sizeof err);
  else if (app.got_subcommand("forecast"))
    rc = mfv_forecast(config.c_str(), output.c_str(), seed, jobs, err, sizeof err);
  else if (app.got_subcommand("evaluate"))
    rc = mfv_evaluate(config.c_str(), output.c_str(), seed, jobs, err, sizeof err);

  if (rc != MFV_OK) {
    std::fprintf(stderr, "error (%d): %s\n", rc, err);
    return 1;
  }
  return 0;
}
