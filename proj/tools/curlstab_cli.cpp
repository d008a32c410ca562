// curlstab: sweeps, plots and property checks for the local minimization problems.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "curlstab/checks.hpp"
#include "curlstab/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stable local minimization in H(curl) and H(div): sweeps and checks"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  int threads = 0;
  bool full_subsets = false;
  auto* sweep = app.add_subcommand("sweep", "run a randomized sweep and write CSV evidence");
  sweep->add_option("--config", config_path, "sweep configuration (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "output CSV (overrides the config)");
  sweep->add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
  sweep->add_flag("--full-subsets", full_subsets, "enumerate all 16 face subsets");

  std::string csv_path, plot_dir;
  auto* plot = app.add_subcommand("plot", "ratio-vs-p series and SVG charts from a sweep CSV");
  plot->add_option("--csv", csv_path, "sweep CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_dir, "output directory")->required();

  std::string suite = "all";
  std::uint64_t seed = 2024;
  auto* check = app.add_subcommand("check", "run property suites; nonzero exit on violation");
  check->add_option("--suite", suite, "piola | calculus | solver | all")
      ->check(CLI::IsMember({"piola", "calculus", "solver", "all"}));
  check->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      curlstab::SweepConfig config = curlstab::load_sweep_config(config_path);
      if (!out_path.empty()) config.output = out_path;
      if (threads > 0) config.threads = threads;
      if (full_subsets) config.full_subsets = true;
      if (config.output.empty()) throw curlstab::ConfigError("no output path (config 'output' or --out)");
      const curlstab::SweepResult result = curlstab::run_sweep(config);
      const std::string summary = curlstab::write_sweep_files(config.output, result);
      std::size_t failed = 0;
      for (const auto& r : result.records) failed += r.ok() ? 0 : 1;
      std::printf("%zu records (%zu failed) -> %s\n", result.records.size(), failed, config.output.c_str());
      std::printf("%-16s %-10s %10s %10s %10s %8s\n", "tet", "kind", "kappa", "max_ratio", "slope", "growth");
      for (const auto& s : result.summaries)
        std::printf("%-16s %-10s %10.4f %10.4f %10.4f %8.4f\n", s.tet_id.c_str(), curlstab::kind_name(s.kind),
                    s.kappa_K, s.max_ratio, s.slope, s.growth);
      std::printf("summary -> %s\n", summary.c_str());
      return failed == 0 ? 0 : 3;
    }
    if (*plot) {
      const auto files = curlstab::emit_plots(csv_path, plot_dir);
      std::printf("%zu files written to %s\n", files.size(), plot_dir.c_str());
      return 0;
    }
    if (*check) return curlstab::run_check_suite(suite, std::cout, seed) ? 0 : 1;
  } catch (const curlstab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
