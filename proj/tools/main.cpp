#include <iostream>

#include <CLI11.hpp>

#include "qhmcgp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gaussian process regression with QHMC-trained hyperparameters and adaptive constraints"};
  app.require_subcommand(1);

  qhmcgp::CliOptions opts;
  std::uint64_t seed = 0;
  app.add_option("--config", opts.config_path, "JSON configuration file (defaults apply when omitted)");
  app.add_option("--out", opts.out_dir, "output directory (overrides output_dir)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  app.add_option("--jobs", opts.jobs, "sweep worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", opts.quiet, "suppress per-run summaries");

  auto* run = app.add_subcommand("run", "run one experiment and append a row to results.csv");
  auto* sweep = app.add_subcommand("sweep", "run the n_train x snr_percent grid");
  auto* trace = app.add_subcommand("trace", "run one experiment and write trace.csv and trace.svg");
  auto* selftest = app.add_subcommand("selftest", "sampler, gradient and kernel consistency checks");
  for (auto* sub : {run, sweep, trace, selftest}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qhmcgp::kExitConfig;
  }
  if (*seed_opt) opts.seed = seed;

  if (*run) return qhmcgp::cmd_run(opts, std::cout, std::cerr);
  if (*sweep) return qhmcgp::cmd_sweep(opts, std::cout, std::cerr);
  if (*trace) return qhmcgp::cmd_trace(opts, std::cout, std::cerr);
  return qhmcgp::cmd_selftest(opts, std::cout, std::cerr);
}
