#include "gmax/gauss_inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "gmax/error.hpp"

namespace gmax::gauss {
namespace {

constexpr double kPsdTolerance = 1e-8;
constexpr double kSymmetryTolerance = 1e-12;

double cardinality_cap(std::size_t level) { return std::exp2(std::exp2(static_cast<double>(level))); }

bool contains(const std::vector<double>& sorted, double t) { return std::binary_search(sorted.begin(), sorted.end(), t); }

}  // namespace

FiniteGaussian::FiniteGaussian(std::vector<double> points, Eigen::MatrixXd cov)
    : points_(std::move(points)), cov_(std::move(cov)) {
  const auto n = static_cast<Eigen::Index>(points_.size());
  if (cov_.rows() != n || cov_.cols() != n) throw ShapeError("covariance size does not match the point count");
  if (n == 0) return;
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw NotPsdError("covariance matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kPsdTolerance) {
    throw NotPsdError("covariance matrix has eigenvalue " + std::to_string(eig.eigenvalues().minCoeff()));
  }
}

FiniteGaussian FiniteGaussian::from_spec(const kernels::ProcessSpec& spec, std::vector<double> points) {
  const auto values = kernels::covariance_matrix(spec, points);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd cov = Eigen::Map<const Eigen::MatrixXd>(values.data(), n, n);
  return FiniteGaussian(std::move(points), std::move(cov));
}

double sudakov_lower(const FiniteGaussian& fg) {
  const std::size_t n = fg.size();
  if (n < 2) throw ParameterError("Sudakov bound needs at least two points");
  double best = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, fg.increment_sq(i, j));
  }
  return std::sqrt(std::log2(static_cast<double>(n)) / (2.0 * std::numbers::pi)) * std::sqrt(std::max(best, 0.0));
}

double chatterjee_diff_bound(const FiniteGaussian& a, const FiniteGaussian& b) {
  if (a.size() != b.size()) throw ShapeError("Gaussian vectors have different dimensions");
  const std::size_t n = a.size();
  if (n < 2) throw ParameterError("Chatterjee bound needs at least two points");
  double gamma = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      gamma = std::max(gamma, std::abs(a.increment_sq(i, j) - b.increment_sq(i, j)));
    }
  }
  return std::sqrt(gamma * std::log(static_cast<double>(n)));
}

ChainingNets dyadic_nets(std::size_t depth, std::optional<std::vector<double>> extra) {
  if (depth > kMaxNetDepth) {
    throw ConstructionError("net depth " + std::to_string(depth) + " exceeds the supported maximum " +
                            std::to_string(kMaxNetDepth));
  }
  ChainingNets nets;
  nets.levels.push_back({0.5});
  for (std::size_t k = 1; k <= depth; ++k) {
    const std::size_t count = std::size_t{1} << (std::size_t{1} << k);
    const double step = 1.0 / static_cast<double>(count);
    std::vector<double> level(count);
    for (std::size_t j = 1; j <= count; ++j) level[j - 1] = static_cast<double>(j) * step;
    nets.levels.push_back(std::move(level));
  }
  if (extra && !extra->empty()) {
    std::vector<double> last = nets.levels.back();
    for (double t : *extra) {
      if (!(t >= 0.0 && t <= 1.0)) throw ConstructionError("net point outside [0,1]");
    }
    last.insert(last.end(), extra->begin(), extra->end());
    std::sort(last.begin(), last.end());
    last.erase(std::unique(last.begin(), last.end()), last.end());
    if (static_cast<double>(last.size()) > cardinality_cap(depth + 1)) {
      throw ConstructionError("augmented level has " + std::to_string(last.size()) +
                              " points, more than 2^{2^" + std::to_string(depth + 1) + "}; increase the depth");
    }
    nets.levels.push_back(std::move(last));
  }
  return nets;
}

void validate_nets(const ChainingNets& nets) {
  if (nets.levels.empty() || nets.levels.front().size() != 1) throw ConstructionError("T_0 must be a single point");
  for (std::size_t k = 0; k < nets.levels.size(); ++k) {
    const auto& level = nets.levels[k];
    if (!std::is_sorted(level.begin(), level.end())) throw ConstructionError("net level is not sorted");
    if (static_cast<double>(level.size()) > cardinality_cap(k)) {
      throw ConstructionError("level " + std::to_string(k) + " exceeds 2^{2^k} points");
    }
    if (k > 0) {
      for (double t : nets.levels[k - 1]) {
        if (!contains(level, t)) throw ConstructionError("net levels are not nested");
      }
    }
  }
}

double chaining_upper(const IncrementNorm& increment_norm, const ChainingNets& nets, double l) {
  validate_nets(nets);
  if (!(l > 0.0)) throw DomainError("L must be positive");
  double worst = 0.0;
  for (double t : nets.levels.back()) {
    double sum = 0.0;
    for (std::size_t k = 0; k < nets.levels.size(); ++k) {
      const auto& level = nets.levels[k];
      // nested levels: once t is in T_k every later term vanishes
      if (contains(level, t)) break;
      double best = INFINITY;
      for (double s : level) best = std::min(best, increment_norm(t, s));
      sum += std::exp2(0.5 * static_cast<double>(k)) * best;
    }
    worst = std::max(worst, sum);
  }
  return l * worst;
}

double mills_tail_bound(double x, double sigma) {
  if (!(x > 0.0)) throw DomainError("x must be positive");
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  const double r = x / sigma;
  return std::exp(-0.5 * r * r) / (r * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace gmax::gauss
