#include "gmax/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gmax/error.hpp"

namespace gmax::bounds {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPowerTolerance = 1e-12;
// Beyond this point Phi(u)^n is 1 to double precision for any n < 2^64.
constexpr double kQuadratureCutoff = 40.0;

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("H must lie in (0,1)");
}

void check_scale(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("C must be a positive finite number");
}

double upper_tail(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

// int_0^cutoff g(u) du, adaptive Gauss-Kronrod.
template <class F>
double integrate_tail(F g) {
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, kQuadratureCutoff, 25,
                                                                                     1e-14, &error);
  return value;
}

}  // namespace

double c2() noexcept { return 1.0 / std::sqrt(2.0 * kPi * kLn2); }

double lower_bound_thm1(double c, double hurst) {
  check_scale(c);
  check_hurst(hurst);
  return c / std::sqrt(4.0 * hurst * kPi * std::numbers::e * kLn2);
}

double upper_bound_thm1(double c, double hurst) {
  check_scale(c);
  check_hurst(hurst);
  return kTalagrandL * c * std::sqrt(2.0 * kPi / (hurst * kLn2 * kLn2 * kLn2)) *
         std::erfc(std::sqrt(hurst * kLn2 / 2.0));
}

double upper_bound_sudakov_fernique(double c) {
  check_scale(c);
  return c * std::sqrt(2.0 * kPi);
}

double sudakov_grid_lower_bound(double c, double hurst, std::uint64_t n) {
  check_scale(c);
  if (!(hurst > 0.0 && hurst <= 1.0)) throw DomainError("H must lie in (0,1]");
  if (n < 1) throw DomainError("n must be at least 1");
  const double nn = static_cast<double>(n);
  return c * std::sqrt(std::log2(nn + 1.0) / (std::pow(nn, 2.0 * hurst) * 2.0 * kPi));
}

std::uint64_t thm2_threshold(double hurst) {
  check_hurst(hurst);
  const double exponent = 1.0 / hurst;
  if (exponent >= 63.0) return std::numeric_limits<std::uint64_t>::max();
  const double t = std::exp2(exponent);
  return static_cast<std::uint64_t>(std::ceil(t * (1.0 - kTwoPowerTolerance)));
}

double delta_upper_bound_thm2(double c, double hurst, std::uint64_t n) {
  check_scale(c);
  check_hurst(hurst);
  if (n < thm2_threshold(hurst)) {
    throw ValidityError("delta bound requires n >= 2^{1/H} = " + std::to_string(std::exp2(1.0 / hurst)) +
                        ", got n = " + std::to_string(n));
  }
  const double nn = static_cast<double>(n);
  const double ln = std::log(nn);
  const double nh = std::pow(nn, hurst);
  return (2.0 * c * std::sqrt(ln) / nh) * (1.0 + 4.0 / nh + 0.0074 / std::pow(ln, 1.5));
}

double chernoff_siegmund_delta(std::uint64_t n) {
  if (n < 1) throw DomainError("n must be at least 1");
  return kChernoffAlpha / std::sqrt(static_cast<double>(n));
}

ChatterjeeModulus chatterjee_modulus(double h1, double h2, std::uint64_t n) {
  if (!(h1 >= 0.0 && h1 < 1.0)) throw ParameterError("H1 must lie in [0,1)");
  if (!(h2 > h1 && h2 < 1.0)) throw ParameterError("H2 must lie in (H1,1)");
  if (n < 1) throw ParameterError("n must be at least 1");
  const double nn = static_cast<double>(n);
  double alpha = 0.0;
  for (std::uint64_t j = 1; j <= n; ++j) {
    const double x = static_cast<double>(j) / nn;
    alpha = std::max(alpha, std::pow(x, 2.0 * h1) - std::pow(x, 2.0 * h2));
  }
  ChatterjeeModulus out;
  out.alpha_n = alpha;
  out.value = std::sqrt(alpha * std::log(nn));
  out.alpha_bound = h1 > 0.0 ? (h2 - h1) / (std::numbers::e * h1) : 1.0 - std::pow(nn, -2.0 * h2);
  return out;
}

double h_zero_limit(std::uint64_t n) {
  if (n < 1) throw DomainError("n must be at least 1");
  const double nn = static_cast<double>(n);
  // 1 - Phi^n written to keep precision where Phi is close to 1.
  const double integral = integrate_tail([nn](double u) { return -std::expm1(nn * std::log1p(-upper_tail(u))); });
  return integral / std::numbers::sqrt2;
}

double white_noise_limit(std::uint64_t n) {
  const double k = static_cast<double>(n) + 1.0;
  const double positive = integrate_tail([k](double u) { return -std::expm1(k * std::log1p(-upper_tail(u))); });
  const double negative = integrate_tail([k](double u) { return std::pow(upper_tail(u), k); });
  return (positive - negative) / std::numbers::sqrt2;
}

double thm4iii_lower_bound(double hurst, std::uint64_t n) {
  check_hurst(hurst);
  if (n < 1) throw DomainError("n must be at least 1");
  const double nn = static_cast<double>(n);
  const double root_ln = std::sqrt(std::log(nn));
  if (n < thm2_threshold(hurst)) return 0.5 * c2() * root_ln;
  const double nh = std::pow(nn, hurst);
  const double first = 1.0 / (5.0 * std::sqrt(hurst)) - 6.0 * root_ln / nh;
  const double second = c2() * root_ln / nh;
  return std::max(first, second) - kC1;
}

double thm4iii_simplified_lower_bound(double hurst) {
  check_hurst(hurst);
  return c2() / ((6.0 + c2()) * 5.0 * std::sqrt(hurst)) - kC1;
}

std::vector<BoundReport> bound_reports(double c, double hurst, std::uint64_t n) {
  std::vector<BoundReport> out;
  out.push_back({"lower_thm1", lower_bound_thm1(c, hurst), {{"C", c}, {"H", hurst}},
                 "lower Hoelder inequality with exponent H"});
  out.push_back({"upper_thm1", upper_bound_thm1(c, hurst), {{"C", c}, {"H", hurst}, {"L", kTalagrandL}},
                 "upper Hoelder inequality with exponent H"});
  out.push_back({"upper_sf", upper_bound_sudakov_fernique(c), {{"C", c}},
                 "upper Hoelder inequality with exponent H >= 1/2"});
  out.push_back({"sudakov_grid", sudakov_grid_lower_bound(c, hurst, n), {{"C", c}, {"H", hurst}, {"n", double(n)}},
                 "lower Hoelder inequality; bounds the grid maximum"});
  if (n >= thm2_threshold(hurst)) {
    out.push_back({"delta_thm2", delta_upper_bound_thm2(c, hurst, n), {{"C", c}, {"H", hurst}, {"n", double(n)}},
                   "n >= 2^{1/H}"});
  }
  out.push_back({"chernoff_siegmund", chernoff_siegmund_delta(n), {{"alpha", kChernoffAlpha}, {"n", double(n)}},
                 "Brownian motion (H = 1/2), asymptotic in n"});
  out.push_back({"thm4iii", thm4iii_lower_bound(hurst, n), {{"c1", kC1}, {"c2", c2()}, {"H", hurst}, {"n", double(n)}},
                 "fBm only"});
  out.push_back({"h_zero_limit", h_zero_limit(n), {{"n", double(n)}}, "fBm, limit H -> 0"});
  return out;
}

}  // namespace gmax::bounds
