#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "teichlab/error.hpp"
#include "teichlab/io.hpp"

namespace teichlab {

enum class ParamType { Integer, Number, String, Boolean, IntegerArray, NumberArray, StringArray, Object, Any };

struct ParamInfo {
  std::string name;
  ParamType type = ParamType::Any;
  Json default_value;  // null: required unless nullable
  std::string help;
  bool nullable = false;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<ParamInfo> params;
};

// Registry in its stable listing order.
const std::vector<ExperimentInfo>& experiment_catalogue();
const ExperimentInfo* find_experiment(const std::string& name);
// [{"name", "description", "params": [{"name", "type", "default", "help"}]}]
Json catalogue_json();

// Top-level config keys: experiment (required), seed, threads, out_dir,
// params. Unknown keys anywhere are rejected with ConfigError. Returns the
// config with every default filled in.
Json validate_config(const Json& config);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // overrides config out_dir
  std::optional<std::uint64_t> seed;             // overrides config seed
  std::optional<unsigned> threads;               // overrides config threads
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunResult {
  Json config;   // validated, with overrides applied
  Json summary;  // printed by the CLI
  std::vector<OutputFile> files;
  double wall_time = 0;
};

// Validates and computes everything in memory before writing the outputs and
// manifest.json into the output directory (each file atomically). Nothing is
// written when validation or the computation fails. out_dir "" skips writing.
RunResult run_experiment(const Json& config, const RunOptions& opt = {});

// 0 success, 2 configuration or input-data error, 3 numerical budget
// (BudgetExceeded, QuadratureUnstable), 1 anything else.
int exit_code_for(Errc code) noexcept;

// 64-bit FNV-1a, used for config hashes in manifests.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace teichlab
