#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "gmax/bounds.hpp"
#include "gmax/error.hpp"
#include "gmax/rng.hpp"

using namespace gmax::bounds;

namespace {

double q_tail(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

// Composite Simpson rule on [0, 12].
template <class F>
double simpson(F f) {
  const int n = 200000;
  const double h = 12.0 / n;
  double s = f(0.0) + f(12.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

struct McResult {
  double mean, se;
};

// (1/sqrt 2) E (max of k iid normals)^+ or, with positive_part = false, E max.
McResult mc_max(int k, long samples, bool positive_part, std::uint64_t seed) {
  gmax::NormalStream s(seed, static_cast<std::uint64_t>(k));
  double sum = 0, sq = 0;
  for (long i = 0; i < samples; ++i) {
    double m = -INFINITY;
    for (int j = 0; j < k; ++j) m = std::max(m, s.next());
    if (positive_part) m = std::max(m, 0.0);
    m /= std::numbers::sqrt2;
    sum += m;
    sq += m * m;
  }
  const double mean = sum / samples;
  return {mean, std::sqrt((sq / samples - mean * mean) / samples)};
}

}  // namespace

TEST_CASE("constants") {
  CHECK(c2() == doctest::Approx(0.47918).epsilon(1e-5));
  CHECK(kTalagrandL == 3.75);
  CHECK(kChernoffAlpha == 0.5826);
}

TEST_CASE("1/(5 sqrt H) lower bound") {
  CHECK(lower_bound_thm1(1, 0.1) == doctest::Approx(0.64988).epsilon(1e-5));
  for (double h : {0.05, 0.3, 0.9}) {
    CHECK(lower_bound_thm1(1, h) * std::sqrt(h) == doctest::Approx(0.2055).epsilon(1e-3));
    CHECK(lower_bound_thm1(2, h) == doctest::Approx(2 * lower_bound_thm1(1, h)));
  }
  CHECK_THROWS_AS(lower_bound_thm1(1, 0.0), gmax::DomainError);
  CHECK_THROWS_AS(lower_bound_thm1(-1, 0.5), gmax::DomainError);
}

TEST_CASE("lower and upper envelope with simplified constants") {
  CHECK(upper_bound_thm1(1, 0.1) < 16.3 / std::sqrt(0.1));
  for (int i = 1; i <= 999; ++i) {
    const double h = i / 1000.0;
    const double lo = lower_bound_thm1(1, h), hi = upper_bound_thm1(1, h);
    CHECK(lo < hi);
    CHECK(lo > 1.0 / (5.0 * std::sqrt(h)));
    CHECK(hi < 16.3 / std::sqrt(h));
  }
  CHECK(upper_bound_thm1(3, 0.4) == doctest::Approx(3 * upper_bound_thm1(1, 0.4)));
  // direct evaluation with the complementary error function
  const double h = 0.3, l2 = std::numbers::ln2;
  CHECK(upper_bound_thm1(1, h) ==
        doctest::Approx(3.75 * std::sqrt(2 * std::numbers::pi / (h * l2 * l2 * l2)) * std::erfc(std::sqrt(h * l2 / 2))));
}

TEST_CASE("Sudakov-Fernique bound") {
  CHECK(upper_bound_sudakov_fernique(1) == doctest::Approx(2.50663).epsilon(1e-5));
  CHECK(upper_bound_sudakov_fernique(0.5) == doctest::Approx(1.25331).epsilon(1e-5));
  CHECK(upper_bound_sudakov_fernique(1) < upper_bound_thm1(1, 0.5));
}

TEST_CASE("Sudakov grid bound") {
  CHECK(sudakov_grid_lower_bound(1, 0.5, 2) == doctest::Approx(std::sqrt(std::log2(3.0) / (4 * std::numbers::pi))));
  CHECK(sudakov_grid_lower_bound(1, 0.5, 2) == doctest::Approx(0.35514).epsilon(1e-4));
  for (double h : {0.1, 0.7}) CHECK(sudakov_grid_lower_bound(1, h, 1) == doctest::Approx(0.39894).epsilon(1e-5));
  for (double h : {0.025, 0.05, 0.2}) {
    const auto x = static_cast<std::uint64_t>(std::exp(1 / (2 * h)));
    CHECK(sudakov_grid_lower_bound(1, h, x) * std::sqrt(h) >= 0.2055);
  }
  CHECK_THROWS_AS(sudakov_grid_lower_bound(1, 0.5, 0), gmax::DomainError);
}

TEST_CASE("discretization gap bound") {
  const double ln16 = std::log(16.0);
  CHECK(delta_upper_bound_thm2(1, 0.5, 16) ==
        doctest::Approx(2 * std::sqrt(ln16) / 4 * (1 + 1 + 0.0074 / std::pow(ln16, 1.5))));
  CHECK(delta_upper_bound_thm2(1, 0.5, 16) == doctest::Approx(1.666444).epsilon(1e-6));
  const double ln256 = std::log(256.0);
  CHECK(delta_upper_bound_thm2(1, 0.5, 256) ==
        doctest::Approx(2 * std::sqrt(ln256) / 16 * (1 + 4.0 / 16 + 0.0074 / std::pow(ln256, 1.5))));
  CHECK_THROWS_AS(delta_upper_bound_thm2(1, 0.5, 3), gmax::ValidityError);
  CHECK_NOTHROW(delta_upper_bound_thm2(1, 0.5, 4));
  CHECK(thm2_threshold(0.5) == 4);
  CHECK(thm2_threshold(0.25) == 16);
  CHECK(thm2_threshold(0.3) == 11);
  double previous = INFINITY;
  for (std::uint64_t n = 4; n <= 65536; n *= 4) {
    const double v = delta_upper_bound_thm2(1, 0.5, n);
    CHECK(v < previous);
    previous = v;
  }
  CHECK(delta_upper_bound_thm2(2, 0.5, 64) == doctest::Approx(2 * delta_upper_bound_thm2(1, 0.5, 64)));
}

TEST_CASE("Chernoff-Siegmund asymptotic") {
  CHECK(chernoff_siegmund_delta(10000) == doctest::Approx(0.005826));
  CHECK(chernoff_siegmund_delta(1) == 0.5826);
  CHECK(chernoff_siegmund_delta(400) / chernoff_siegmund_delta(100) == doctest::Approx(0.5));
}

TEST_CASE("continuity modulus") {
  const auto m = chatterjee_modulus(0.4, 0.5, 4);
  CHECK(m.alpha_n == doctest::Approx(std::pow(0.25, 0.8) - 0.25));
  CHECK(m.alpha_n == doctest::Approx(0.0799).epsilon(1e-3));
  CHECK(m.value == doctest::Approx(0.33283).epsilon(1e-4));
  const auto z = chatterjee_modulus(0.0, 0.5, 4);
  CHECK(z.alpha_n == doctest::Approx(0.75));
  CHECK(z.alpha_bound == doctest::Approx(0.75));
  CHECK(chatterjee_modulus(0.0, 0.001, 16).value == doctest::Approx(0.12382).epsilon(1e-4));
  CHECK(chatterjee_modulus(0.3, 0.3 + 1e-9, 64).value < 1e-3);
  for (double h1 : {0.1, 0.3, 0.6}) {
    for (double h2 : {h1 + 0.05, h1 + 0.3}) {
      if (h2 >= 1) continue;
      for (std::uint64_t n : {2u, 16u, 1024u}) {
        const auto c = chatterjee_modulus(h1, h2, n);
        CHECK(c.alpha_n <= c.alpha_bound + 1e-15);
        CHECK(c.value <= std::sqrt(std::log(double(n)) * (h2 - h1) / (std::numbers::e * h1)) + 1e-15);
      }
    }
  }
  CHECK_THROWS_AS(chatterjee_modulus(0.5, 0.4, 4), gmax::ParameterError);
  CHECK_THROWS_AS(chatterjee_modulus(-0.1, 0.4, 4), gmax::ParameterError);
}

TEST_CASE("H -> 0 limit by quadrature") {
  CHECK(std::abs(h_zero_limit(1) - 1 / (2 * std::sqrt(std::numbers::pi))) < 1e-8);
  CHECK(h_zero_limit(1) == doctest::Approx(0.282095).epsilon(1e-6));
  double previous = 0;
  for (std::uint64_t n = 1; n <= 4096; n *= 2) {
    const double v = h_zero_limit(n);
    CHECK(v > previous);
    previous = v;
    const double oracle = simpson([n](double u) { return 1 - std::pow(1 - q_tail(u), double(n)); }) / std::numbers::sqrt2;
    CHECK(std::abs(v - oracle) < 1e-8);
  }
  CHECK(h_zero_limit(2) == doctest::Approx(0.481566).epsilon(1e-6));
  CHECK(h_zero_limit(16) == doctest::Approx(1.248745).epsilon(1e-6));
}

TEST_CASE("H -> 0 limit against Monte Carlo") {
  for (int n : {1, 2, 8, 64}) {
    const long samples = n == 64 ? 1000000 : 10000000;
    const auto mc = mc_max(n, samples, true, 77);
    CHECK(std::abs(h_zero_limit(n) - mc.mean) <= 4 * mc.se);
    const auto all = mc_max(n + 1, samples / 10, false, 78);
    CHECK(std::abs(white_noise_limit(n) - all.mean) <= 4 * all.se);
  }
  CHECK(white_noise_limit(1) == doctest::Approx(1 / std::sqrt(2 * std::numbers::pi)).epsilon(1e-9));
}

TEST_CASE("small-H lower bounds") {
  const double r = std::sqrt(std::log(1024.0));
  CHECK(thm4iii_lower_bound(0.1, 1024) == doctest::Approx(c2() * r / 2 - 0.0107));
  CHECK(thm4iii_simplified_lower_bound(0.1) == doctest::Approx(0.0361).epsilon(1e-3));
  CHECK(thm4iii_lower_bound(0.1, 1024) >= thm4iii_simplified_lower_bound(0.1));
  CHECK(thm4iii_lower_bound(0.1, 2) == doctest::Approx(0.19948).epsilon(1e-4));
  double previous = -INFINITY;
  for (int k = 2; k <= 60; ++k) {
    const double v = thm4iii_lower_bound(1.0 / k, std::uint64_t{1} << k);
    CHECK(v > previous);
    previous = v;
  }
  CHECK(previous > 1.5);
}

TEST_CASE("bound reports") {
  const auto reports = bound_reports(1.0, 0.5, 16);
  bool has_delta = false;
  for (const auto& r : reports) {
    CHECK(std::isfinite(r.value));
    CHECK_FALSE(r.constants_used.empty());
    has_delta |= r.name == "delta_thm2";
  }
  CHECK(has_delta);
  for (const auto& r : bound_reports(1.0, 0.2, 16)) CHECK(r.name != "delta_thm2");
}
