#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gmax/bounds.hpp"
#include "gmax/error.hpp"
#include "gmax/estimator.hpp"
#include "gmax/gauss_inequalities.hpp"
#include "gmax/rng.hpp"

using namespace gmax::gauss;
using gmax::kernels::ProcessSpec;

namespace {

std::vector<double> grid(std::size_t n, bool with_zero) {
  std::vector<double> g;
  for (std::size_t i = with_zero ? 0 : 1; i <= n; ++i) g.push_back(static_cast<double>(i) / n);
  return g;
}

IncrementNorm fbm_norm(double h) {
  return [h](double t, double s) { return std::pow(std::abs(t - s), h); };
}

}  // namespace

TEST_CASE("finite Gaussian validation") {
  CHECK_THROWS_AS(FiniteGaussian({0.0, 1.0}, Eigen::MatrixXd::Identity(3, 3)), gmax::ShapeError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  CHECK_THROWS_AS(FiniteGaussian({0.0, 1.0}, asym), gmax::NotPsdError);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(FiniteGaussian({0.0, 1.0}, indefinite), gmax::NotPsdError);
  const auto fg = FiniteGaussian::from_spec(ProcessSpec::fbm(0.3), grid(8, true));
  CHECK(fg.size() == 9);
  CHECK(fg.increment_sq(0, 8) == doctest::Approx(1.0));
}

TEST_CASE("Sudakov lower bound") {
  for (double h : {0.2, 0.7}) {
    const auto pair = FiniteGaussian::from_spec(ProcessSpec::fbm(h), {0.0, 1.0});
    CHECK(sudakov_lower(pair) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)));
  }
  const auto dup = FiniteGaussian::from_spec(ProcessSpec::fbm(0.5), {0.0, 0.5, 0.5});
  CHECK(sudakov_lower(dup) == 0.0);
  for (double h : {0.2, 0.5, 0.8}) {
    for (std::size_t n : {4u, 16u, 64u}) {
      // n+1 points {0, 1/n, ..., 1}: log2(n+1) with nearest-neighbour distance n^{-H}
      const auto fg = FiniteGaussian::from_spec(ProcessSpec::fbm(h), grid(n, true));
      CHECK(sudakov_lower(fg) == doctest::Approx(gmax::bounds::sudakov_grid_lower_bound(1, h, n)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(sudakov_lower(FiniteGaussian::from_spec(ProcessSpec::fbm(0.5), {0.5})), gmax::ParameterError);
}

TEST_CASE("Chatterjee difference bound") {
  const auto a = FiniteGaussian::from_spec(ProcessSpec::fbm(0.4), grid(16, false));
  CHECK(chatterjee_diff_bound(a, a) == 0.0);
  for (std::size_t n : {4u, 16u}) {
    const auto x = FiniteGaussian::from_spec(ProcessSpec::fbm(0.4), grid(n, false));
    const auto y = FiniteGaussian::from_spec(ProcessSpec::fbm(0.5), grid(n, false));
    const double expect = gmax::bounds::chatterjee_modulus(0.4, 0.5, n).value;
    CHECK(chatterjee_diff_bound(x, y) == doctest::Approx(expect).epsilon(1e-9));
    CHECK(chatterjee_diff_bound(y, x) == chatterjee_diff_bound(x, y));
  }
  Eigen::MatrixXd c(2, 2);
  c << 1, 0.5, 0.5, 1;  // a_12 = 1
  const FiniteGaussian p({0.0, 1.0}, c), q({0.0, 1.0}, 4 * c);
  CHECK(chatterjee_diff_bound(p, q) == doctest::Approx(std::sqrt(3 * std::log(2.0))));
  CHECK(chatterjee_diff_bound(p, q) == doctest::Approx(1.44202).epsilon(1e-5));
  CHECK_THROWS_AS(chatterjee_diff_bound(p, a), gmax::ShapeError);
}

TEST_CASE("dyadic nets") {
  const auto d0 = dyadic_nets(0);
  REQUIRE(d0.levels.size() == 1);
  CHECK(d0.levels[0] == std::vector<double>{0.5});
  const auto d1 = dyadic_nets(1);
  CHECK(d1.levels[1] == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  std::vector<double> thirds{1.0 / 3, 2.0 / 3, 1.0};
  const auto d2 = dyadic_nets(2, thirds);
  REQUIRE(d2.levels.size() == 4);
  CHECK(d2.levels.back().size() == 18);
  CHECK(d2.levels.back().size() <= 256);
  for (std::size_t depth = 0; depth <= 4; ++depth) {
    const auto nets = dyadic_nets(depth);
    CHECK_NOTHROW(validate_nets(nets));
    for (std::size_t k = 0; k < nets.levels.size(); ++k) CHECK(nets.levels[k].size() <= std::exp2(std::exp2(k)));
  }
  CHECK_THROWS_AS(dyadic_nets(0, std::vector<double>{0.1, 0.2, 0.3, 0.4}), gmax::ConstructionError);
  CHECK_THROWS_AS(dyadic_nets(5), gmax::ConstructionError);
  ChainingNets broken{{{0.5}, {0.25, 0.75}}};
  CHECK_THROWS_AS(validate_nets(broken), gmax::ConstructionError);
}

TEST_CASE("chaining upper bound") {
  CHECK(chaining_upper(fbm_norm(0.5), dyadic_nets(0)) == 0.0);
  for (double h : {0.2, 0.5, 0.8}) {
    for (std::size_t depth : {1u, 2u, 3u}) {
      const auto nets = dyadic_nets(depth);
      double series = 0;
      for (std::size_t k = 0; k <= depth; ++k) series += std::exp2(k / 2.0) * std::exp2(-h * std::exp2(double(k)));
      CHECK(chaining_upper(fbm_norm(h), nets) <= 3.75 * series + 1e-12);
    }
  }
  for (double h : {0.2, 0.5, 0.8}) {
    const auto nets = dyadic_nets(2);
    const auto fg = FiniteGaussian::from_spec(ProcessSpec::fbm(h), nets.levels.back());
    CHECK(chaining_upper(fbm_norm(h), nets) >= sudakov_lower(fg));
  }
}

TEST_CASE("refining a level does not increase the chaining bound") {
  auto nets = dyadic_nets(2);
  nets.levels[1] = {0.25, 0.5, 1.0};
  const double coarse = chaining_upper(fbm_norm(0.4), nets);
  nets.levels[1] = {0.25, 0.5, 0.75, 1.0};
  CHECK(chaining_upper(fbm_norm(0.4), nets) <= coarse);
  CHECK(chaining_upper(fbm_norm(0.4), nets) == chaining_upper(fbm_norm(0.4), dyadic_nets(2)));
}

TEST_CASE("Mills ratio bound") {
  CHECK(mills_tail_bound(1, 1) == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * std::numbers::pi)));
  CHECK(mills_tail_bound(2.5, 2.5) == doctest::Approx(0.241971).epsilon(1e-6));
  CHECK(mills_tail_bound(6, 2) == doctest::Approx(mills_tail_bound(3, 1)));
  CHECK(mills_tail_bound(3, 1) == doctest::Approx(0.0014773).epsilon(1e-4));
  gmax::NormalStream s(31, 0);
  long hits = 0;
  const long samples = 10000000;
  for (long i = 0; i < samples; ++i) hits += s.next() >= 3.0;
  const double p = double(hits) / samples;
  CHECK(p == doctest::Approx(0.00135).epsilon(0.05));
  CHECK(p < mills_tail_bound(3, 1));
  CHECK_THROWS_AS(mills_tail_bound(0, 1), gmax::DomainError);
  CHECK_THROWS_AS(mills_tail_bound(1, -1), gmax::DomainError);
}

TEST_CASE("sandwich around the Monte Carlo maximum on {i/16}") {
  const auto nets = dyadic_nets(4, grid(16, false));
  for (double h : {0.2, 0.5, 0.8}) {
    const auto fg = FiniteGaussian::from_spec(ProcessSpec::fbm(h), grid(16, true));
    const auto e = gmax::estimator::estimate_expected_max(ProcessSpec::fbm(h), 16, 20000, 41);
    CHECK(sudakov_lower(fg) <= e.mean + 3 * e.std_error);
    CHECK(e.mean - 3 * e.std_error <= chaining_upper(fbm_norm(h), nets));
  }
}
