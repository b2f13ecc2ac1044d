#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "gmax/kernels.hpp"
#include "gmax/sampling.hpp"

namespace gmax::estimator {

/// Monte Carlo estimate of E max_{0<=i<=n} X_{i/n}.
struct MaxEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double ci_level = 0.999;
  double half_width = 0.0;  ///< z(ci_level) * std_error, two-sided
  std::size_t m = 0;        ///< paths
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Coupled estimate of f(fine) - f(coarse) from shared fine-grid paths.
struct GapEstimate {
  std::size_t coarse_n = 0;
  std::size_t fine_n = 0;
  double mean_gap = 0.0;
  double std_error = 0.0;
  double min_path_gap = 0.0;  ///< smallest per-path gap; never negative
  std::size_t m = 0;
};

struct Options {
  bool antithetic = true;
  unsigned threads = 1;
};

inline constexpr double kDefaultCiLevel = 0.999;

/// Largest entry. Throws ShapeError on empty input.
double grid_max(std::span<const double> path);

/// Two-sided standard normal quantile: P(|Z| <= z) = level.
double normal_quantile_two_sided(double level);

/// Mean and standard error of per-path statistics. With antithetic pairing,
/// paths 2j and 2j+1 are averaged into one observation first.
MaxEstimate summarize(std::span<const double> per_path, bool antithetic, double ci_level);

MaxEstimate estimate_expected_max(const sampling::PathGenerator& generator, std::size_t m, std::uint64_t seed,
                                  double ci_level = kDefaultCiLevel, const Options& options = {});
MaxEstimate estimate_expected_max(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m,
                                  std::uint64_t seed, double ci_level = kDefaultCiLevel,
                                  const Options& options = {});

/// One estimate per entry of ns, all read off the same paths on the finest
/// grid. Every entry must divide max(ns).
std::vector<MaxEstimate> estimate_expected_max_nested(const kernels::ProcessSpec& spec,
                                                      std::span<const std::size_t> ns, std::size_t m,
                                                      std::uint64_t seed, double ci_level = kDefaultCiLevel,
                                                      const Options& options = {});

GapEstimate estimate_gap(const kernels::ProcessSpec& spec, std::size_t coarse_n, std::size_t fine_n, std::size_t m,
                         std::uint64_t seed, const Options& options = {});

/// Gaps for several coarse resolutions against one shared fine batch.
std::vector<GapEstimate> estimate_gaps(const kernels::ProcessSpec& spec, std::span<const std::size_t> coarse_ns,
                                       std::size_t fine_n, std::size_t m, std::uint64_t seed,
                                       const Options& options = {});

/// {spec, n, m, seed, mean, stderr, ci_level, half_width}
nlohmann::json to_json(const MaxEstimate& estimate, const kernels::ProcessSpec& spec);

}  // namespace gmax::estimator
