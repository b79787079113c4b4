#include "qenr/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-state noise radar simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string csv_path;
  std::string out_dir;
  std::int64_t seed_override = -1;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed_override, "override the config seed");
  run->add_option("--out-dir", out_dir, "override the output directory");
  run->add_option("--threads", threads, "sweep worker threads")
      ->check(CLI::Range(1, 256));

  CLI::App* desc =
      app.add_subcommand("describe", "print derived quantities, no run");
  desc->add_option("config", config_path, "config file")->required();

  CLI::App* fit = app.add_subcommand(
      "fit", "fit the gain model to an emitted fig4_enhancement.csv");
  fit->add_option("csv", csv_path, "enhancement CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      qenr::ExperimentConfig config = qenr::load_config_file(config_path);
      if (seed_override >= 0) {
        config.seed = static_cast<std::uint64_t>(seed_override);
      }
      qenr::RunOptions options;
      options.out_dir_override = out_dir;
      options.threads = threads;
      const qenr::RunManifest manifest = qenr::run_experiment(config, options);
      std::cout << "wrote " << manifest.files.size() << " files to "
                << manifest.directory << " (config " << manifest.config_hash
                << ", seed " << manifest.seed << ")\n";
    } else if (desc->parsed()) {
      std::cout << qenr::describe(qenr::load_config_file(config_path));
    } else if (fit->parsed()) {
      const auto points = qenr::read_enhancement_csv(csv_path);
      const qenr::FitResult result = qenr::fit_gain(points);
      std::printf("P0 = %.6g (%.3f dB), rms residual %.4g, %d iterations, "
                  "%zu points\n",
                  result.p0, result.p0_db(), result.residual,
                  result.iterations, points.size());
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
