#pragma once

#include "regpath/baselines.hpp"
#include "regpath/continuation.hpp"
#include "regpath/problems.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace regpath {

// Validation failure; what() lists every offending field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct LassoProblemSpec {
  LassoInstanceSpec instance;
  std::optional<double> l1_weight;
  double init_scale = 0.0;
};

struct MlpProblemSpec {
  std::string dataset;  // "iris" or "mnist"
  MlpArchitecture arch;
  double train_fraction = 0.8;
  std::optional<Index> train_limit;
  double init_scale = 0.01;
};

struct ExperimentPaths {
  std::filesystem::path iris_csv;
  std::vector<std::filesystem::path> mnist_images;
  std::vector<std::filesystem::path> mnist_labels;
  std::filesystem::path output_dir;
};

struct ExperimentConfig {
  std::variant<LassoProblemSpec, MlpProblemSpec> problem;
  std::optional<Index> batch_size;  // nullopt: deterministic mode
  std::variant<ContinuationConfig, WsConfig> method;
  ExperimentPaths paths;
  std::uint64_t seed = 0;
  std::string precision = "double";

  // The validated config with every default written out and paths made
  // absolute. Re-parsing it yields the same experiment.
  nlohmann::json resolved;
};

// Relative paths resolve against base_dir. Unknown keys are rejected.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt);
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<std::uint64_t> seed_override = std::nullopt);

struct BuiltProblem {
  std::unique_ptr<BiObjectiveProblem> problem;
  ParamVector theta_init;
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

struct RunOutcome {
  std::filesystem::path run_dir;
  FrontArchive archive;
  Trace trace;
  nlohmann::json metrics;
};

// Runs the configured method and writes front.csv, trace.csv, metrics.json
// and config.resolved.json into a fresh timestamped directory under
// out_root (cfg.paths.output_dir when empty). On failure the directory
// keeps whatever was written plus error.json, and the exception propagates.
RunOutcome run_experiment(const ExperimentConfig& cfg, std::filesystem::path out_root = {});

// Shared-reference comparison of two exported fronts.
nlohmann::json compare_fronts(const FrontArchive& a, const FrontArchive& b);
nlohmann::json compare_front_files(const std::filesystem::path& a, const std::filesystem::path& b,
                                   const std::filesystem::path& out_json);

}  // namespace regpath
