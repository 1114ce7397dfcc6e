// clm_sim: command-line front end for the composite load simulator.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clm/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Composite load model simulator"};
  cli.require_subcommand(1);

  clm::app::RunOptions run_opts;
  std::optional<double> dt, t_end;
  std::optional<long long> seed;

  auto* run = cli.add_subcommand("run", "Simulate one scenario");
  run->add_option("--config", run_opts.config, "Scenario JSON file")->required();
  run->add_option("--out-dir", run_opts.out_dir, "Output directory");
  run->add_option("--channels", run_opts.channels, "Channels to write (default: all)")
      ->delimiter(',');
  run->add_option("--dt", dt, "Step size override (s)");
  run->add_option("--t-end", t_end, "Horizon override (s)");
  run->add_option("--seed", seed, "Reserved; unused");

  std::string cmp_a, cmp_b;
  std::vector<std::string> cmp_channels;
  auto* compare = cli.add_subcommand("compare", "Per-channel MSE between two trajectory CSVs");
  compare->add_option("a", cmp_a, "Reference trajectory CSV")->required();
  compare->add_option("b", cmp_b, "Trajectory CSV to compare")->required();
  compare->add_option("--channels", cmp_channels, "Channels (default: all shared)")
      ->delimiter(',');

  std::string preset_action, preset_name;
  auto* preset = cli.add_subcommand("preset", "List or show parameter presets");
  preset->add_option("action", preset_action, "list | show")->required();
  preset->add_option("name", preset_name, "Preset name for show");

  clm::app::RunOptions batch_opts;
  std::vector<std::string> batch_configs;
  std::optional<double> batch_dt, batch_t_end;
  auto* batch = cli.add_subcommand("batch", "Run several scenarios in parallel");
  batch->add_option("--config", batch_configs, "Scenario JSON files")->required();
  batch->add_option("--out-dir", batch_opts.out_dir, "Root output directory");
  batch->add_option("--channels", batch_opts.channels, "Channels to write")->delimiter(',');
  batch->add_option("--dt", batch_dt, "Step size override (s)");
  batch->add_option("--t-end", batch_t_end, "Horizon override (s)");
  batch->add_option("--seed", seed, "Reserved; unused");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    return clm::app::report(std::cerr, clm::ErrorCode::Usage, e.what());
  }

  if (*run) {
    run_opts.dt = dt;
    run_opts.t_end = t_end;
    run_opts.seed = seed;
    return clm::app::run(run_opts, std::cout, std::cerr);
  }
  if (*compare) return clm::app::compare(cmp_a, cmp_b, cmp_channels, std::cout, std::cerr);
  if (*preset) return clm::app::preset(preset_action, preset_name, std::cout, std::cerr);
  if (*batch) {
    batch_opts.dt = batch_dt;
    batch_opts.t_end = batch_t_end;
    batch_opts.seed = seed;
    return clm::app::batch(batch_configs, batch_opts, std::cout, std::cerr);
  }
  return 0;
}
