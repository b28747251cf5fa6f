// adcons: command-line front end.
//
//   adcons sare --config model.json
//   adcons graph-check --config exp.json
//   adcons run --config exp.json [--out dir] [--threads k] [--force] [--emit-plots]
//   adcons sweep --config exp.json --key protocol.gamma --values 0 0.5 1 [--keep-going]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "adcons/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Adaptive consensus of stochastic multi-agent systems"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  adcons::RunOptions opts;
  std::string key;
  std::vector<std::string> values;

  auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config, "experiment config (JSON)")->required(); };
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--threads", opts.threads, "worker threads for the ensemble")->check(CLI::PositiveNumber);
    sub->add_flag("--force", opts.force, "run even if protocol validation fails");
    sub->add_flag("--emit-plots", opts.emit_plots, "also write SVG line plots");
  };

  auto* sare = app.add_subcommand("sare", "solve the SARE and print P, K, Gamma");
  add_config(sare);
  auto* graph = app.add_subcommand("graph-check", "topology report for the configured graph");
  add_config(graph);
  auto* run = app.add_subcommand("run", "simulate the ensemble and write CSVs plus manifest");
  add_config(run);
  add_run_flags(run);
  auto* sweep = app.add_subcommand("sweep", "one run per value of a scalar config key");
  add_config(sweep);
  add_run_flags(sweep);
  sweep->add_option("--key", key, "dotted config key, e.g. protocol.gamma")->required();
  sweep->add_option("--values", values, "values to substitute")->expected(0, -1);
  sweep->add_flag("--keep-going", opts.keep_going, "continue after a failed value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : adcons::exit_code::config;
  }
  if (!out_dir.empty()) opts.out = out_dir;

  if (*sare) return adcons::cmd_sare(config, std::cout, std::cerr);
  if (*graph) return adcons::cmd_graph_check(config, std::cout, std::cerr);
  if (*run) return adcons::cmd_run(config, opts, std::cout, std::cerr);
  return adcons::cmd_sweep(config, key, values, opts, std::cout, std::cerr);
}
