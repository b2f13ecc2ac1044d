#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gmax/kernels.hpp"

namespace gmax::experiments {

enum class Experiment { Fig1, Fig2, BoundsTable, DeltaStudy, LimitH0, Thm3Demo, Certify };

std::string_view to_string(Experiment e) noexcept;
/// Accepts the CLI names (fig1, bounds, delta, limit-h0, thm3, certify, ...)
/// and the enum spellings (BOUNDS_TABLE, ...).
Experiment experiment_from_string(std::string_view name);

/// Raised for unusable configurations; the CLI maps it to exit code 3.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HolderConstants {
  double c1 = 1.0, h1 = 0.5, c2 = 1.0, h2 = 0.5;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Fig1;
  std::vector<double> h_grid;
  std::vector<std::size_t> n_grid;
  std::size_t paths = 0;
  std::uint64_t seed = 20240101;
  double ci_level = 0.999;
  std::string output_path;  ///< empty: stdout
  unsigned threads = 1;
  bool antithetic = true;
  double scale = 1.0;                 ///< C in the bounds table
  std::size_t fine_n = 65536;         ///< delta study
  std::vector<double> small_h_grid;   ///< thm3 fixed-n sweep
  std::optional<kernels::ProcessSpec> spec;  ///< certify
  HolderConstants constants;                 ///< certify
  std::size_t grid_size = 257;               ///< certify
};

/// Defaults for one experiment; threads come from GMAX_THREADS.
ExperimentConfig default_config(Experiment e);

/// Overlays the JSON object onto the experiment's defaults. Relative file
/// names in a spec are resolved against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

/// Throws ConfigError on invalid grids or path counts.
void validate(const ExperimentConfig& cfg);

/// Canonical JSON of every field that affects results (threads and output
/// path excluded).
nlohmann::json canonical_json(const ExperimentConfig& cfg);

/// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

struct ExperimentResult {
  std::string text;  ///< CSV (or JSON for certify), including the comment header
  std::vector<std::string> failures;
  bool passed() const noexcept { return failures.empty(); }
};

ExperimentResult run_fig1(const ExperimentConfig& cfg);
ExperimentResult run_fig2(const ExperimentConfig& cfg);
ExperimentResult run_bounds_table(const ExperimentConfig& cfg);
ExperimentResult run_delta_study(const ExperimentConfig& cfg);
ExperimentResult run_limit_h0(const ExperimentConfig& cfg);
ExperimentResult run_thm3_demo(const ExperimentConfig& cfg);
ExperimentResult run_certify(const ExperimentConfig& cfg);

/// Validates, then dispatches on cfg.experiment.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Value formatting shared by every table: %.10g, NA for NaN.
std::string format_value(double v);

}  // namespace gmax::experiments
