#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gmax/frac_calculus.hpp"

namespace gmax::kernels {

enum class Family { Fbm, SubFbm, BiFbm, Fredholm, WienerIntegral };

std::string_view to_string(Family family) noexcept;
Family family_from_string(std::string_view name);

/// Values of a Fredholm kernel K(t,u) on the square uniform grid
/// {i/q} x {j/q}, row index t, column index u.
class KernelGrid {
 public:
  KernelGrid(std::size_t points, std::vector<double> values);

  std::size_t points() const noexcept { return points_; }
  std::size_t resolution() const noexcept { return points_ - 1; }
  double at(std::size_t t_idx, std::size_t u_idx) const noexcept { return values_[t_idx * points_ + u_idx]; }
  std::span<const double> row(std::size_t t_idx) const noexcept {
    return std::span<const double>(values_).subspan(t_idx * points_, points_);
  }

 private:
  std::size_t points_;
  std::vector<double> values_;
};

/// CSV with header `t,s,value`, rows ordered t-major over a square uniform grid.
KernelGrid load_kernel_grid(const std::string& path);
void save_kernel_grid(const KernelGrid& grid, const std::string& path);

/// Zero-mean Gaussian process on [0,1] described by its family and parameters.
struct ProcessSpec {
  Family family = Family::Fbm;
  double hurst = 0.5;
  double bifractional = 1.0;  ///< K, bi-fBm only
  double scale = 1.0;         ///< C: the process is C times the unit-scale family
  std::shared_ptr<const KernelGrid> kernel;            ///< Fredholm only
  std::string kernel_file;
  std::shared_ptr<const frac::GridFunction> integrand;  ///< Wiener integral only
  std::string integrand_file;

  static ProcessSpec fbm(double hurst, double scale = 1.0);
  static ProcessSpec sub_fbm(double hurst, double scale = 1.0);
  static ProcessSpec bi_fbm(double hurst, double k, double scale = 1.0);
  static ProcessSpec fredholm(std::shared_ptr<const KernelGrid> kernel, double scale = 1.0);
  static ProcessSpec wiener_integral(std::shared_ptr<const frac::GridFunction> integrand, double hurst,
                                     double scale = 1.0);

  /// Throws DomainError/ParameterError when an invariant is violated.
  void validate() const;
};

/// JSON with fields family, H, K, C, kernel_file, integrand_file.
/// Deserialization loads the referenced files, resolved against base_dir.
nlohmann::json to_json(const ProcessSpec& spec);
ProcessSpec spec_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

/// Witness of the worst ratio for one side of the Hoelder condition.
struct Witness {
  double t = 0.0;
  double s = 0.0;
  double ratio = 0.0;
};

struct HolderCertificate {
  double c1 = 0.0, h1 = 0.0, c2 = 0.0, h2 = 0.0;
  std::size_t grid_size = 0;
  bool passed = false;
  Witness worst_lower_pair;  ///< minimizes ||X_t - X_s|| / |t-s|^H1
  Witness worst_upper_pair;  ///< maximizes ||X_t - X_s|| / |t-s|^H2
};

nlohmann::json to_json(const HolderCertificate& cert);

/// Relative slack allowed when comparing increment norms to the Hoelder
/// envelope; absorbs roundoff in sqrt(R(t,t)+R(s,s)-2R(t,s)).
inline constexpr double kCertificationTolerance = 1e-9;

double fbm_cov(double t, double s, double hurst);
double subfbm_cov(double t, double s, double hurst);
double bifbm_cov(double t, double s, double hurst, double k);

/// Covariance of the white-noise-plus-common-variable limit of fBm as H -> 0.
double limit_cov_H_to_0(double t, double s);

/// Covariance R(t,s) of the process (including the scale C^2).
double covariance(const ProcessSpec& spec, double t, double s);

/// Covariance matrix (row-major) at the given times. Wiener-integral specs
/// reuse one transfer image per time.
std::vector<double> covariance_matrix(const ProcessSpec& spec, std::span<const double> times);

/// ||X_t - X_s||_2.
double increment_l2(const ProcessSpec& spec, double t, double s);

/// Trapezoidal int_0^1 (K(t,u) - K(s,u))^2 du on the kernel's own grid.
double fredholm_increment_sq(const KernelGrid& grid, std::size_t t_idx, std::size_t s_idx);

/// Checks C1|t-s|^H1 <= ||X_t - X_s|| <= C2|t-s|^H2 on all pairs of the
/// uniform grid with grid_size points.
HolderCertificate certify_quasihelix(const ProcessSpec& spec, double c1, double h1, double c2, double h2,
                                     std::size_t grid_size);

/// Minimum eigenvalue of the covariance matrix on the uniform grid with
/// `points` points.
double min_covariance_eigenvalue(const ProcessSpec& spec, std::size_t points);

}  // namespace gmax::kernels
