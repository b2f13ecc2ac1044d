#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gmax/kernels.hpp"

namespace gmax::gauss {

/// Centered Gaussian vector indexed by time points.
class FiniteGaussian {
 public:
  /// Throws ShapeError on mismatched sizes, NotPsdError when the matrix is
  /// not symmetric or has an eigenvalue below -1e-8.
  FiniteGaussian(std::vector<double> points, Eigen::MatrixXd cov);

  /// Covariance of a process spec at the given points.
  static FiniteGaussian from_spec(const kernels::ProcessSpec& spec, std::vector<double> points);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<double>& points() const noexcept { return points_; }
  const Eigen::MatrixXd& cov() const noexcept { return cov_; }

  /// ||X_i - X_j||_2^2
  double increment_sq(std::size_t i, std::size_t j) const noexcept {
    return cov_(i, i) + cov_(j, j) - 2.0 * cov_(i, j);
  }

 private:
  std::vector<double> points_;
  Eigen::MatrixXd cov_;
};

/// sqrt(log2 n / (2 pi)) min_{i != j} ||X_i - X_j||_2
double sudakov_lower(const FiniteGaussian& fg);

/// sqrt(max_ij |a_ij - b_ij| ln n) with a_ij, b_ij the squared increments.
double chatterjee_diff_bound(const FiniteGaussian& a, const FiniteGaussian& b);

/// Nested point sets T_0 = {1/2} ⊂ T_1 ⊂ ... with |T_k| <= 2^{2^k}.
struct ChainingNets {
  std::vector<std::vector<double>> levels;  ///< each level sorted ascending
};

inline constexpr std::size_t kMaxNetDepth = 4;

/// T_0 = {1/2}, T_k = {j 2^{-2^k}, j = 1..2^{2^k}} for k <= depth. A
/// nonempty extra set adds level depth+1 = T_depth ∪ extra, which must fit
/// 2^{2^{depth+1}} points (ConstructionError otherwise). Depth is limited to
/// kMaxNetDepth so levels stay enumerable.
ChainingNets dyadic_nets(std::size_t depth, std::optional<std::vector<double>> extra = std::nullopt);

/// Throws ConstructionError when nets are not nested or break the cardinality bound.
void validate_nets(const ChainingNets& nets);

using IncrementNorm = std::function<double(double, double)>;

/// L max_{t in T} sum_k 2^{k/2} min_{s in T_k} d(t,s) over the final level T.
double chaining_upper(const IncrementNorm& increment_norm, const ChainingNets& nets, double l = 3.75);

/// (sigma / (x sqrt(2 pi))) exp(-x^2 / (2 sigma^2))
double mills_tail_bound(double x, double sigma);

}  // namespace gmax::gauss
