#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "algstab/serialization.hpp"
#include "algstab/stability.hpp"

namespace algstab {

struct Diagnostic {
  int line = 0;  // 1-based; 0 when no location is known
  std::string message;
};

/// Full structural and range validation of a config document. Every
/// problem is reported, not just the first.
std::vector<Diagnostic> validate_config_text(const std::string& text);
std::vector<Diagnostic> validate_config(const std::filesystem::path& path);

std::string format_diagnostic(const std::string& source, const Diagnostic& d);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool strict = false;
};

struct TrialRow {
  int trial_id = 0;
  std::string model_tag;
  int n = 0;
  int m = 0;
  int degree = 0;
  double norm0 = 0.0;
  double norm1 = 0.0;
  StabilityTrial trial;
};

struct ExperimentResult {
  std::vector<TrialRow> rows;
  Json summary;
  int exit_code = 0;
  std::filesystem::path out_dir;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitViolation = 2;

/// Runs a validated config. Results are deterministic in the config and
/// independent of the worker count. Throws ConfigError on invalid input.
ExperimentResult run_experiment(const Json& config, const std::filesystem::path& base_dir,
                                const RunOptions& options = {});

/// Writes trials.csv, summary.json and plotdata/ according to the config's
/// output formats.
void write_artifacts(const ExperimentResult& result, const std::vector<std::string>& formats);

/// CSV text for the given rows, header included.
std::string rows_to_csv(const std::vector<TrialRow>& rows);

}  // namespace algstab
