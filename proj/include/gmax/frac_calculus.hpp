#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gmax::frac {

/// Samples of a function on the uniform grid {i/q, i = 0..q} of [0,1],
/// optionally with samples of its derivative.
class GridFunction {
 public:
  explicit GridFunction(std::vector<double> values, std::optional<std::vector<double>> derivative = std::nullopt);

  static GridFunction sample(std::size_t q, const std::function<double(double)>& f,
                             const std::function<double(double)>& df = {});

  std::size_t resolution() const noexcept { return values_.size() - 1; }
  double spacing() const noexcept { return 1.0 / static_cast<double>(resolution()); }
  double point(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  const std::optional<std::vector<double>>& derivative() const noexcept { return derivative_; }

  /// Index of the grid point equal to t (within 1e-9 of spacing).
  /// Throws ParameterError when t is not on the grid.
  std::size_t index_of(double t) const;

 private:
  std::vector<double> values_;
  std::optional<std::vector<double>> derivative_;
};

/// CSV with header `t,value[,derivative]`; t must form a uniform grid on [0,1].
GridFunction load_grid_function(const std::string& path);
void save_grid_function(const GridFunction& f, const std::string& path);

/// Right-sided Riemann-Liouville integral of order alpha in (0,1] at grid point t:
/// (1/Gamma(alpha)) * int_t^1 f(s) (s-t)^(alpha-1) ds.
/// Product integration: f is piecewise linear and the kernel is integrated
/// exactly on each cell, so the endpoint singularity costs no accuracy.
double rl_integral_right(const GridFunction& f, double alpha, double t);

/// The same integral at every grid point.
std::vector<double> rl_integral_right_grid(const GridFunction& f, double alpha);

/// Order-zero operator: f(t).
double rl_identity(const GridFunction& f, double t);

/// Right-sided fractional derivative of order |alpha|, alpha in (-1,0):
/// -d/dt (I^{alpha+1} f)(t), central differences of the (alpha+1)-integral
/// with step equal to the grid spacing (one-sided at 0 and 1).
double rl_derivative_right(const GridFunction& f, double alpha, double t);

/// c_H = sqrt(2H Gamma(3/2-H) / (Gamma(2-2H) Gamma(H+1/2))).
double c_H(double hurst);

/// Normalizing constant of the transfer operator with the 1/Gamma(alpha)
/// operators above: c_H * Gamma(H+1/2). With this constant the indicator
/// representation reproduces the fBm covariance.
double transfer_constant(double hurst);

/// Image of g = f * 1_[a,b) under the transfer operator
///   (K^H g)(u) = k_H u^(1/2-H) (I^{H-1/2}_{1-} [v^(H-1/2) g])(u).
///
/// The image is kept in factored form so that L2 products can integrate the
/// u^(1/2-H) singularity exactly:
///  - H > 1/2: `regular` holds J = I^{H-1/2}[v^(H-1/2) g] at the nodes and
///    K^H g = k_H u^(1/2-H) J.
///  - H <= 1/2: `regular` holds A = I^{H+1/2}[v^(H-1/2) g] at the nodes and
///    K^H g = -k_H u^(1/2-H) A'; products use exact cell means of A'.
class TransferImage {
 public:
  TransferImage(double hurst, double constant, std::vector<double> regular, std::vector<double> nodal);

  double hurst() const noexcept { return hurst_; }
  std::size_t resolution() const noexcept { return regular_.size() - 1; }
  std::span<const double> regular() const noexcept { return regular_; }

  /// Pointwise values of K^H g at the nodes. May be infinite at u = 0
  /// (H > 1/2) and is only indicative next to jumps of g (H < 1/2).
  std::span<const double> values() const noexcept { return nodal_; }

  TransferImage operator-(const TransferImage& other) const;

 private:
  double hurst_;
  double constant_;
  std::vector<double> regular_;
  std::vector<double> nodal_;

  friend double transfer_inner(const TransferImage& a, const TransferImage& b);
};

/// K^H f over the whole interval.
TransferImage kh_apply(const GridFunction& f, double hurst);

/// K^H [f 1_[a,b)] with a, b grid indices, a <= b.
TransferImage kh_apply_window(const GridFunction& f, double hurst, std::size_t begin, std::size_t end);

/// int_0^1 (K^H f)(u) (K^H g)(u) du.
double transfer_inner(const TransferImage& a, const TransferImage& b);

/// Covariance of X_t = int_0^t f dB^H by the Ito isometry:
/// int_0^1 K^H[f 1_[0,t)] K^H[f 1_[0,s)] du. t and s must be grid points.
double wiener_integral_cov(const GridFunction& f, double t, double s, double hurst);

/// Covariance matrix (row-major) of the Wiener integral at the given times.
std::vector<double> wiener_integral_cov_matrix(const GridFunction& f, double hurst, std::span<const double> times);

/// ||X_t - X_s||_2 for the Wiener integral process.
double wiener_integral_increment(const GridFunction& f, double t, double s, double hurst);

struct SufficientConditionReport {
  bool left_ok = false;
  bool right_ok = false;
  std::optional<double> left_witness;   ///< first grid point violating the left condition
  std::optional<double> right_witness;  ///< first grid point violating the right condition
};

/// Grid check of the sufficient conditions on f for the two-sided Hoelder
/// bounds of the Wiener integral process with constant c.
///  H < 1/2 (h = H - 1/2): left  f >= c and f - t f'/h >= c;
///                          right |f| <= c and |f - t f'/h| <= c.
///  H >= 1/2:              left  f >= c everywhere or f <= -c everywhere;
///                          right |f| <= c.
SufficientConditionReport check_sufficient_conditions(const GridFunction& f, double hurst, double c);

}  // namespace gmax::frac
