#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "gmax/error.hpp"
#include "gmax/sampling.hpp"

using namespace gmax::sampling;
using gmax::kernels::ProcessSpec;

namespace {

// Largest |sample cov - R| in units of its standard error m^{-1/2}(R_tt R_ss + R_ts^2)^{1/2}.
double worst_cov_z(const PathBatch& b, const ProcessSpec& spec) {
  const std::size_t n = b.n;
  std::vector<double> acc(n * n, 0.0);
  for (std::size_t p = 0; p < b.m; ++p) {
    const auto x = b.path(p);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) acc[i * n + j] += x[i + 1] * x[j + 1];
    }
  }
  double worst = 0.0;
  const double m = static_cast<double>(b.m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double t = double(i + 1) / n, s = double(j + 1) / n;
      const double rts = gmax::kernels::covariance(spec, t, s);
      const double se = std::sqrt((gmax::kernels::covariance(spec, t, t) * gmax::kernels::covariance(spec, s, s) + rts * rts) / m);
      worst = std::max(worst, std::abs(acc[i * n + j] / m - rts) / se);
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("fGn autocovariance") {
  for (double h : {0.1, 0.5, 0.9}) CHECK(fgn_autocovariance(0, h) == 1.0);
  for (unsigned k : {1u, 2u, 17u}) CHECK(fgn_autocovariance(k, 0.5) == doctest::Approx(0.0));
  CHECK(fgn_autocovariance(1, 0.75) == doctest::Approx(0.5 * (std::pow(2.0, 1.5) - 2)));
  CHECK(fgn_autocovariance(1, 0.75) == doctest::Approx(0.414214).epsilon(1e-6));
  CHECK_THROWS_AS(fgn_autocovariance(1, 1.0), gmax::DomainError);
}

TEST_CASE("circulant spectrum") {
  const auto white = circulant_spectrum(16, 0.5);
  for (double ev : white.eigenvalues) CHECK(ev == doctest::Approx(1.0));
  for (double h : {0.2, 0.8}) {
    const auto s = circulant_spectrum(100, h);
    double sum = 0;
    for (double ev : s.eigenvalues) sum += ev;
    CHECK(sum == doctest::Approx(200.0));
  }
  // brute force on the explicit 8 x 8 circulant
  const auto s = circulant_spectrum(4, 0.75);
  Eigen::VectorXd row(8);
  for (int k = 0; k <= 4; ++k) row[k] = fgn_autocovariance(k, 0.75);
  for (int k = 5; k < 8; ++k) row[k] = row[8 - k];
  Eigen::MatrixXd c(8, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) c(i, j) = row[(j - i + 8) % 8];
  }
  Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
  std::vector<double> mine = s.eigenvalues;
  std::sort(mine.begin(), mine.end());
  for (int k = 0; k < 8; ++k) CHECK(mine[k] == doctest::Approx(ev[k]).epsilon(1e-12));
  CHECK(s.min_eigenvalue > 0.0);
  CHECK_THROWS_AS(circulant_spectrum(0, 0.5), gmax::ParameterError);
}

TEST_CASE("circulant embedding is nonnegative across H and n") {
  for (int k = 1; k <= 19; ++k) {
    const double h = 0.05 * k;
    for (int e = 5; e <= 16; ++e) {
      const auto s = circulant_spectrum(std::size_t{1} << e, h);
      const double top = *std::max_element(s.eigenvalues.begin(), s.eigenvalues.end());
      CHECK(s.min_eigenvalue >= -1e-9 * top);
    }
  }
}

TEST_CASE("path layout") {
  const auto b = sample_fbm_paths(32, 10, 0.3, 11, true);
  for (std::size_t p = 0; p < b.m; ++p) CHECK(b.path(p)[0] == 0.0);
  for (std::size_t j = 0; j < 5; ++j) {
    for (std::size_t i = 0; i <= 32; ++i) CHECK(b.path(2 * j + 1)[i] == -b.path(2 * j)[i]);
  }
  CHECK(b.path(0)[5] != b.path(2)[5]);
  CHECK_THROWS_AS(sample_fbm_paths(32, 3, 0.3, 11, true), gmax::ParameterError);
  CHECK(draws_for({10, 0, true}) == 3);
  CHECK(draws_for({10, 0, false}) == 5);
  // prefix property: a path depends only on (seed, index)
  const auto small = sample_fbm_paths(32, 3, 0.3, 11, false);
  const auto large = sample_fbm_paths(32, 8, 0.3, 11, false);
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t i = 0; i <= 32; ++i) CHECK(small.path(p)[i] == large.path(p)[i]);
  }
}

TEST_CASE("generation is independent of the thread count") {
  const auto ref = sample_fbm_paths(1000, 64, 0.7, 5, true, 1);
  for (unsigned threads : {4u, 8u}) CHECK(sample_fbm_paths(1000, 64, 0.7, 5, true, threads).values == ref.values);
  const auto chol = sample_paths(ProcessSpec::sub_fbm(0.4), 24, 30, 9, false, 1);
  CHECK(sample_paths(ProcessSpec::sub_fbm(0.4), 24, 30, 9, false, 4).values == chol.values);
}

TEST_CASE("ray at H = 1") {
  const auto b = sample_fbm_paths(8, 4, 1.0, 3, false);
  for (std::size_t p = 0; p < 4; ++p) {
    const double slope = b.path(p)[8];
    for (std::size_t i = 0; i <= 8; ++i) CHECK(b.path(p)[i] == doctest::Approx(slope * i / 8.0));
  }
}

TEST_CASE("Brownian endpoint variance") {
  const auto b = sample_fbm_paths(1, 100000, 0.5, 17, false);
  double s = 0;
  for (std::size_t p = 0; p < b.m; ++p) s += b.path(p)[1] * b.path(p)[1];
  CHECK(std::abs(s / b.m - 1.0) < 4 * std::sqrt(2.0 / b.m));
}

TEST_CASE("circulant sampler matches the fBm covariance") {
  const auto spec = ProcessSpec::fbm(0.3);
  CHECK(worst_cov_z(sample_fbm_paths(64, 100000, 0.3, 20240101, false), spec) < 4.0);
}

TEST_CASE("self-similarity of the marginal variance") {
  const double h = 0.7;
  const auto b = sample_fbm_paths(100, 40000, h, 23, false);
  for (std::size_t i : {1u, 10u, 37u, 100u}) {
    double s = 0;
    for (std::size_t p = 0; p < b.m; ++p) s += b.path(p)[i] * b.path(p)[i];
    const double target = std::pow(i / 100.0, 2 * h);
    CHECK(std::abs(s / b.m - target) < 4 * target * std::sqrt(2.0 / b.m));
  }
}

TEST_CASE("Cholesky sampler") {
  SUBCASE("fBm law agrees with the exact covariance") {
    const auto spec = ProcessSpec::fbm(0.6);
    CHECK(worst_cov_z(sample_by_cholesky(spec, 16, 100000, 31, false), spec) < 4.0);
  }
  SUBCASE("sub-fBm variance at t = 1") {
    const auto b = sample_by_cholesky(ProcessSpec::sub_fbm(0.75), 32, 100000, 37, false);
    double s = 0;
    for (std::size_t p = 0; p < b.m; ++p) s += b.path(p)[32] * b.path(p)[32];
    const double target = 2 - std::sqrt(2.0);
    CHECK(std::abs(s / b.m - target) < 4 * target * std::sqrt(2.0 / b.m));
  }
  SUBCASE("antithetic pair") {
    const auto b = sample_by_cholesky(ProcessSpec::bi_fbm(0.4, 0.7), 8, 2, 1, true);
    for (std::size_t i = 0; i <= 8; ++i) CHECK(b.path(1)[i] == -b.path(0)[i]);
  }
  SUBCASE("scale enters linearly") {
    const auto a = sample_by_cholesky(ProcessSpec::sub_fbm(0.3, 1.0), 8, 4, 2, false);
    const auto b = sample_by_cholesky(ProcessSpec::sub_fbm(0.3, 3.0), 8, 4, 2, false);
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(b.values[k] == doctest::Approx(3 * a.values[k]));
  }
}

TEST_CASE("binary and csv export") {
  const auto b = sample_fbm_paths(5, 4, 0.4, 99, true);
  std::stringstream bin;
  write_binary(b, bin);
  CHECK(bin.str().size() == 32 + 8 * 4 * 6);
  CHECK(bin.str().substr(0, 8) == "GMAXPB01");
  const auto back = read_binary(bin);
  CHECK(back.n == 5);
  CHECK(back.m == 4);
  CHECK(back.seed == 99);
  CHECK(back.values == b.values);
  std::stringstream bad("NOTMAGIC");
  CHECK_THROWS_AS(read_binary(bad), gmax::FormatError);
  std::stringstream csv;
  write_csv(b, csv);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "path,i,t,value");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 4 * 6);
}
