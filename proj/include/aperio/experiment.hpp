#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "aperio/io.hpp"

namespace aperio {

inline constexpr const char* kToolVersion = "0.1.0";

enum class ToleranceProfile { kDefault, kStrict };

struct Context {
  std::filesystem::path workspace = ".";
  std::uint64_t seed = 0;
  unsigned threads = 1;
  ToleranceProfile tolerance = ToleranceProfile::kDefault;
};

struct Step {
  std::string command;
  Json params;
};

struct ExperimentConfig {
  Context context;
  std::vector<Step> steps;
};

/// Malformed configuration or missing input; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `base_dir` resolves a relative "workspace" entry.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir);

/// Commands accepted by run and the CLI.
const std::vector<std::string>& known_commands();

/// Input and output paths of a step, relative to the workspace. Throws
/// ConfigError for an unknown command or missing required parameters.
std::vector<std::string> step_inputs(const Step& step);
std::vector<std::string> step_outputs(const Step& step);

/// Executes one step, writing its outputs; returns the main report.
Json execute(const Step& step, const Context& ctx);

/// Validates every step up front (inputs must exist or be produced by an
/// earlier step), then executes in order. Returns 0, 1 (operation error) or
/// 2 (config error, nothing written).
int run(const ExperimentConfig& config, std::ostream& log);

/// RFC-4180 CSV view of a report (density_report, frame_report, spectrum).
/// Empty `columns` selects all. Reals at 12 significant digits.
std::string emit_csv(const Json& report, const std::vector<std::string>& columns);

/// Valid column names for a report kind.
std::vector<std::string> csv_columns(const Json& report);

}  // namespace aperio
