#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "gmax/kernels.hpp"
#include "gmax/rng.hpp"

namespace gmax::sampling {

/// Autocovariance of unit-step fractional Gaussian noise:
/// gamma(k) = ((k+1)^{2H} - 2k^{2H} + |k-1|^{2H}) / 2.
double fgn_autocovariance(std::uint64_t k, double hurst);

struct CirculantSpectrum {
  std::size_t n = 0;
  double hurst = 0.0;
  std::vector<double> eigenvalues;  ///< 2n values, clamped to be nonnegative
  double min_eigenvalue = 0.0;      ///< before clamping
};

/// Relative threshold below which a negative eigenvalue aborts the embedding.
inline constexpr double kEmbeddingTolerance = 1e-9;

/// Eigenvalues of the 2n-circulant with first row
/// (gamma(0),...,gamma(n-1),gamma(n),gamma(n-1),...,gamma(1)).
/// Throws EmbeddingError when an eigenvalue is below -1e-9 * max.
CirculantSpectrum circulant_spectrum(std::size_t n, double hurst);

/// m sampled trajectories on {i/n, i = 0..n}, row-major m x (n+1).
struct PathBatch {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  bool antithetic = false;
  kernels::ProcessSpec spec;

  std::span<const double> path(std::size_t p) const noexcept {
    return std::span<const double>(values).subspan(p * (n + 1), n + 1);
  }
};

/// Per-thread sampling state. Each call consumes one stream and yields two
/// independent exact sample paths of length n+1 (first entry 0).
class PathWorker {
 public:
  virtual ~PathWorker() = default;
  virtual void draw(NormalStream& stream, std::span<double> first, std::span<double> second) = 0;
};

/// Immutable, shareable description of an exact sampler on {i/n}.
class PathGenerator {
 public:
  virtual ~PathGenerator() = default;
  virtual std::size_t n() const noexcept = 0;
  virtual std::unique_ptr<PathWorker> make_worker() const = 0;
};

/// Davies-Harte sampler for fBm(H), H in (0,1); the ray xi*t for H = 1.
std::unique_ptr<PathGenerator> make_fbm_generator(std::size_t n, double hurst, double scale = 1.0);

/// Cholesky sampler for any covariance-defined spec. The grid covariance is
/// shifted by 1e-12 I before factorization; if that fails but the minimum
/// eigenvalue is above -1e-8 (relative to the mean variance), a symmetric
/// square root is used instead. Otherwise throws NotPsdError.
std::unique_ptr<PathGenerator> make_cholesky_generator(const kernels::ProcessSpec& spec, std::size_t n);

/// Circulant embedding for fBm, Cholesky for every other family.
std::unique_ptr<PathGenerator> make_generator(const kernels::ProcessSpec& spec, std::size_t n);

struct PathPlan {
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  bool antithetic = false;
};

/// Number of streams (draws) needed for a plan.
std::size_t draws_for(const PathPlan& plan) noexcept;

/// Generates every path of the plan and hands it to visitor(path_index, values).
/// Path p comes from stream p/2 (p/4 with antithetic pairing, where paths
/// 4j+1 and 4j+3 are the negations of 4j and 4j+2). The visitor is called
/// concurrently for distinct indices and must only touch per-index state.
void visit_paths(const PathGenerator& generator, const PathPlan& plan, unsigned threads,
                 const std::function<void(std::size_t, std::span<const double>)>& visitor);

PathBatch sample_fbm_paths(std::size_t n, std::size_t m, double hurst, std::uint64_t seed, bool antithetic,
                           unsigned threads = 1);
PathBatch sample_by_cholesky(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m, std::uint64_t seed,
                             bool antithetic, unsigned threads = 1);
PathBatch sample_paths(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m, std::uint64_t seed,
                       bool antithetic, unsigned threads = 1);

/// 32-byte header ("GMAXPB01", n, m, seed as little-endian u64) followed by
/// the little-endian float64 matrix.
void write_binary(const PathBatch& batch, std::ostream& out);
PathBatch read_binary(std::istream& in);

/// CSV with header `path,i,t,value`.
void write_csv(const PathBatch& batch, std::ostream& out);

}  // namespace gmax::sampling
