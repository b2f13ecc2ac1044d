#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace gmax::bounds {

/// Talagrand's majorizing-measure constant, evaluated at its stated ceiling.
inline constexpr double kTalagrandL = 3.75;
/// Chernoff-Siegmund constant -zeta(1/2)/sqrt(2 pi), to the printed precision.
inline constexpr double kChernoffAlpha = 0.5826;
inline constexpr double kC1 = 0.0107;
/// (2 pi ln 2)^{-1/2}
double c2() noexcept;

struct BoundReport {
  std::string name;
  double value = 0.0;
  std::map<std::string, double> constants_used;
  std::string validity;  ///< empty when unrestricted
};

/// C / sqrt(4 H pi e ln 2)
double lower_bound_thm1(double c, double hurst);

/// L C sqrt(2 pi / (H ln^3 2)) erfc(sqrt(H ln 2 / 2))
double upper_bound_thm1(double c, double hurst);

/// C sqrt(2 pi)
double upper_bound_sudakov_fernique(double c);

/// C sqrt(log2(n+1) / (n^{2H} 2 pi))
double sudakov_grid_lower_bound(double c, double hurst, std::uint64_t n);

/// Smallest integer n with n >= 2^{1/H}.
std::uint64_t thm2_threshold(double hurst);

/// (2C sqrt(ln n) / n^H)(1 + 4/n^H + 0.0074/(ln n)^{3/2}); ValidityError
/// below n = 2^{1/H}.
double delta_upper_bound_thm2(double c, double hurst, std::uint64_t n);

/// alpha n^{-1/2}, the H = 1/2 asymptotic of the discretization gap.
double chernoff_siegmund_delta(std::uint64_t n);

struct ChatterjeeModulus {
  double alpha_n = 0.0;  ///< max_j ((j/n)^{2H1} - (j/n)^{2H2})
  double value = 0.0;    ///< sqrt(alpha_n ln n)
  /// Closed majorant of alpha_n: (H2-H1)/(e H1) for H1 > 0, 1 - n^{-2 H2} for H1 = 0.
  double alpha_bound = 0.0;
};

ChatterjeeModulus chatterjee_modulus(double h1, double h2, std::uint64_t n);

/// (1/sqrt 2) int_0^inf (1 - Phi(u)^n) du
double h_zero_limit(std::uint64_t n);

/// (1/sqrt 2) E max(xi_0, ..., xi_n) for iid standard normals: the H -> 0
/// limit of E max_{0<=i<=n} B^H_{i/n}, where B^H_0 = 0 contributes xi_0.
double white_noise_limit(std::uint64_t n);

/// max{1/(5 sqrt H) - 6 sqrt(ln n)/n^H, c2 sqrt(ln n)/n^H} - c1 for
/// n >= 2^{1/H}, else (c2/2) sqrt(ln n).
double thm4iii_lower_bound(double hurst, std::uint64_t n);

/// c2 / ((6 + c2) 5 sqrt H) - c1: the H-only bound left after optimizing
/// the max over sqrt(ln n)/n^H.
double thm4iii_simplified_lower_bound(double hurst);

/// Every bound evaluated at (C, H, n), with constants and validity ranges.
std::vector<BoundReport> bound_reports(double c, double hurst, std::uint64_t n);

}  // namespace gmax::bounds
