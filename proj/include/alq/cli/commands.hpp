#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "alq/estimator.hpp"
#include "alq/model.hpp"

namespace alq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

enum class Design { kStudy1, kStudy2 };

struct SimulateConfig {
  Design design = Design::kStudy1;
  int subjects = 20;
  int per_subject = 5;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> output;  // stdout when empty
  std::optional<std::filesystem::path> truth;   // defaults to <stem>.truth.json next to output
};

enum class ModelChoice { kAuto, kRandomIntercept, kRandomInterceptSlope };

struct FitConfig {
  std::filesystem::path input;
  std::filesystem::path out_dir = ".";
  std::vector<double> quantiles{0.5};
  QuantileSpec spec;
  PriorConfig priors;
  FitOptions options;
  ModelChoice model = ModelChoice::kAuto;
  bool progabide_covariates = false;
  int grid_size = 512;
};

struct PredictConfig {
  std::filesystem::path summary;
  std::filesystem::path input;
  std::optional<std::filesystem::path> output;
};

struct DiagnoseConfig {
  std::filesystem::path trace;
  std::optional<std::filesystem::path> output;  // density CSV
  int grid_size = 512;
  double level = 0.95;
};

/// Loads the panel named by the config, applying the covariate
/// preprocessing and model choice, and validates it.
PanelDataset load_fit_data(const FitConfig& config);

/// Directory name of one quantile level, e.g. "p0.25".
std::string quantile_dir_name(double p);

// Each command throws alq::Error subclasses; `run` maps them to exit codes.
void cmd_simulate(const SimulateConfig& config, std::ostream& out);
void cmd_fit(const FitConfig& config, std::ostream& log);
void cmd_predict(const PredictConfig& config, std::ostream& out);
void cmd_diagnose(const DiagnoseConfig& config, std::ostream& out);

/// Parses arguments (argv[0] is the program name) and dispatches. Returns
/// 0 on success, 2 for input or configuration errors and 3 for numeric
/// failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace alq::cli
