// Command-line runner: `algstab run <config>` and `algstab validate <config>`.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "algstab/errors.hpp"
#include "algstab/experiment.hpp"

namespace {

int print_diagnostics(const std::string& source, const std::vector<algstab::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << algstab::format_diagnostic(source, d) << "\n";
  return diags.empty() ? algstab::kExitPass : algstab::kExitUsage;
}

int run(const std::string& path, const algstab::RunOptions& options) {
  const auto diags = algstab::validate_config(path);
  if (!diags.empty()) return print_diagnostics(path, diags);

  std::ifstream in(path);
  const algstab::Json config = algstab::Json::parse(in);
  const auto result =
      algstab::run_experiment(config, std::filesystem::path(path).parent_path(), options);

  std::vector<std::string> formats{"csv", "json", "plotdata"};
  if (config.contains("output") && config.at("output").contains("formats")) {
    formats = config.at("output").at("formats").get<std::vector<std::string>>();
  }
  algstab::write_artifacts(result, formats);

  const auto& s = result.summary;
  std::cout << "trials: " << s.at("rows").get<long>() << "  violations: "
            << s.at("violations").get<long>() << "  inapplicable: "
            << s.at("inapplicable").get<long>() << "\n";
  for (const auto& [check, stats] : s.at("per_check").items()) {
    std::cout << "  " << check << ": pass " << stats.at("pass") << ", violated "
              << stats.at("violated") << ", inapplicable " << stats.at("inapplicable")
              << ", min margin " << stats.at("min_margin").dump() << "\n";
  }
  for (const auto& v : s.at("violation_list")) {
    std::cout << "VIOLATION trial " << v.at("trial_id") << " " << v.at("check").get<std::string>()
              << ": lhs " << v.at("lhs").dump() << " > rhs " << v.at("rhs").dump() << "\n";
  }
  std::cout << "artifacts: " << result.out_dir.string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability experiments for algebraic filters and AlgNNs"};
  app.require_subcommand(1);

  std::string config;
  algstab::RunOptions options;
  std::string out_dir;
  std::uint64_t seed = 0;

  auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
  run_cmd->add_option("config", config, "JSON experiment config")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (overrides the config)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Base seed (overrides the config)");
  run_cmd->add_option("--jobs", options.jobs, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--strict", options.strict, "Treat inapplicable trials as failures");

  auto* validate_cmd = app.add_subcommand("validate", "Validate a config without running it");
  validate_cmd->add_option("config", config, "JSON experiment config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : algstab::kExitUsage;
  }

  try {
    if (*validate_cmd) {
      const int code = print_diagnostics(config, algstab::validate_config(config));
      if (code == algstab::kExitPass) std::cout << config << ": ok\n";
      return code;
    }
    if (*out_opt) options.out_dir = out_dir;
    if (*seed_opt) options.seed = seed;
    return run(config, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return algstab::kExitUsage;
  }
}
