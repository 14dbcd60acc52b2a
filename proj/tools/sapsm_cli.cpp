#include "sapsm/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"String-averaging projection methods: feasibility (dsap) and constrained minimization (sapsm)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sapsm::kLibraryVersion));

  sapsm::RunOptions run;
  std::uint64_t seed = 0;
  std::size_t max_iters = 0;
  double eps = 0.0;
  std::string algorithm;
  auto* run_cmd = app.add_subcommand("run", "Run an algorithm on a problem file or a previous manifest");
  run_cmd->add_option("--problem", run.problem_path, "Problem file or manifest.json")->required()->check(CLI::ExistingFile);
  auto* alg_opt = run_cmd->add_option("--algorithm", algorithm, "dsap, sapsm or psm-baseline")
                      ->check(CLI::IsMember({"dsap", "sapsm", "psm-baseline"}));
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the file's seed");
  auto* iters_opt = run_cmd->add_option("--max-iters", max_iters, "Override max_iters");
  auto* eps_opt = run_cmd->add_option("--eps", eps, "Override eps");
  run_cmd->add_option("--out", run.out_dir, "Output directory for trace.csv and manifest.json")->capture_default_str();
  run_cmd->add_option("--override", run.overrides, "KEY=VALUE field override (repeatable)");
  run_cmd->add_flag("--timing", run.record_timing, "Record wall-clock elapsed_ns in the trace");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a problem file and list every error");
  validate_cmd->add_option("--problem", validate_path, "Problem file")->required()->check(CLI::ExistingFile);

  std::string manifest_a, manifest_b, compare_out;
  auto* compare_cmd = app.add_subcommand("compare", "Compare the traces of two runs of the same problem");
  compare_cmd->add_option("manifest_a", manifest_a)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("manifest_b", manifest_b)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare_out, "Directory for compare.csv (per-iteration deltas)");

  std::string oracle_problem, oracle_out;
  double grid_step = 1e-2;
  std::size_t refine_rounds = 3;
  auto* oracle_cmd = app.add_subcommand("oracle", "Certify the minimizer of a small (J <= 3) problem by grid search");
  oracle_cmd->add_option("--problem", oracle_problem, "Problem file with an objective")->required()->check(CLI::ExistingFile);
  oracle_cmd->add_option("--out", oracle_out, "Certificate path (default: <problem>.oracle.json)");
  oracle_cmd->add_option("--grid-step", grid_step, "Coarse grid step")->capture_default_str();
  oracle_cmd->add_option("--refine-rounds", refine_rounds, "Tenfold refinement rounds")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    if (*alg_opt) run.algorithm = algorithm;
    if (*seed_opt) run.seed = seed;
    if (*iters_opt) run.max_iters = max_iters;
    if (*eps_opt) run.eps = eps;
    return sapsm::run_command(run, std::cout, std::cerr);
  }
  if (*validate_cmd) return sapsm::validate_command(validate_path, std::cout, std::cerr);
  if (*oracle_cmd) {
    if (oracle_out.empty()) {
      oracle_out = std::filesystem::path(oracle_problem).replace_extension(".oracle.json").string();
    }
    return sapsm::oracle_command(oracle_problem, oracle_out, grid_step, refine_rounds, std::cout, std::cerr);
  }

  try {
    const auto report = sapsm::compare_command(manifest_a, manifest_b);
    std::cout << sapsm::render_summary(report);
    if (!compare_out.empty()) {
      std::filesystem::create_directories(compare_out);
      std::ofstream out(std::filesystem::path(compare_out) / "compare.csv");
      sapsm::write_deltas(out, report);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
