#include "gmax/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>

#include <Eigen/Dense>

#include "csv.hpp"
#include "gmax/error.hpp"

namespace gmax::kernels {
namespace {

void require_times(double t, double s) {
  if (!(t >= 0.0 && s >= 0.0)) throw DomainError("covariance arguments must be nonnegative");
}

void require_open_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("H must lie in (0,1)");
}

// Row of K(t,.) for t in [0,1], linear in t between grid rows.
std::vector<double> kernel_row(const KernelGrid& grid, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("Fredholm kernels are defined on [0,1]");
  const std::size_t q = grid.resolution();
  const double x = t * static_cast<double>(q);
  std::size_t lo = std::min(static_cast<std::size_t>(std::floor(x)), q);
  const double frac = x - static_cast<double>(lo);
  auto a = grid.row(lo);
  std::vector<double> out(a.begin(), a.end());
  if (frac > 1e-12 && lo < q) {
    auto b = grid.row(lo + 1);
    for (std::size_t j = 0; j <= q; ++j) out[j] += frac * (b[j] - a[j]);
  }
  return out;
}

// Trapezoid rule on the uniform grid of [0,1].
template <class F>
double trapezoid(std::size_t q, F&& value) {
  double acc = 0.5 * (value(0) + value(q));
  for (std::size_t j = 1; j < q; ++j) acc += value(j);
  return acc / static_cast<double>(q);
}

double checked_sqrt(double radicand) {
  if (radicand < -1e-12) {
    throw ConsistencyError("negative increment variance " + std::to_string(radicand));
  }
  return std::sqrt(std::max(0.0, radicand));
}

std::vector<double> uniform_grid(std::size_t points) {
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

// ||X_{t_i} - X_{t_j}|| for all pairs, row-major.
std::vector<double> increment_matrix(const ProcessSpec& spec, std::span<const double> times) {
  const std::size_t n = times.size();
  std::vector<double> out(n * n, 0.0);
  if (spec.family == Family::Fredholm) {
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (double t : times) rows.push_back(kernel_row(*spec.kernel, t));
    const std::size_t q = spec.kernel->resolution();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double sq = trapezoid(q, [&](std::size_t k) {
          const double d = rows[i][k] - rows[j][k];
          return d * d;
        });
        out[i * n + j] = out[j * n + i] = spec.scale * std::sqrt(sq);
      }
    }
    return out;
  }
  if (spec.family == Family::Fbm) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        out[i * n + j] = out[j * n + i] = spec.scale * std::pow(std::abs(times[i] - times[j]), spec.hurst);
      }
    }
    return out;
  }
  const auto cov = covariance_matrix(spec, times);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out[i * n + j] = out[j * n + i] = checked_sqrt(cov[i * n + i] + cov[j * n + j] - 2.0 * cov[i * n + j]);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::Fbm: return "FBM";
    case Family::SubFbm: return "SUBFBM";
    case Family::BiFbm: return "BIFBM";
    case Family::Fredholm: return "FREDHOLM";
    case Family::WienerIntegral: return "WIENER_INTEGRAL";
  }
  return "?";
}

Family family_from_string(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::toupper(c));
  });
  for (Family f : {Family::Fbm, Family::SubFbm, Family::BiFbm, Family::Fredholm, Family::WienerIntegral}) {
    if (to_string(f) == upper) return f;
  }
  throw FormatError("unknown process family '" + std::string(name) + "'");
}

KernelGrid::KernelGrid(std::size_t points, std::vector<double> values) : points_(points), values_(std::move(values)) {
  if (points_ < 2) throw ShapeError("kernel grid needs at least two points per axis");
  if (values_.size() != points_ * points_) throw ShapeError("kernel grid must be square");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw DomainError("kernel values must be finite");
  }
}

KernelGrid load_kernel_grid(const std::string& path) {
  const auto table = detail::read_numeric_csv(path);
  if (table.header != std::vector<std::string>{"t", "s", "value"}) {
    throw FormatError(path + ": header must be t,s,value");
  }
  const std::size_t total = table.rows.size();
  const auto points = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(total))));
  if (points < 2 || points * points != total) throw ShapeError(path + ": kernel grid must be square");
  const double q = static_cast<double>(points - 1);
  std::vector<double> values(total);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < points; ++j) {
      const auto& row = table.rows[i * points + j];
      if (std::abs(row[0] - static_cast<double>(i) / q) > 1e-9 || std::abs(row[1] - static_cast<double>(j) / q) > 1e-9) {
        throw FormatError(path + ": rows must enumerate the uniform grid t-major");
      }
      values[i * points + j] = row[2];
    }
  }
  return KernelGrid(points, std::move(values));
}

void save_kernel_grid(const KernelGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << std::setprecision(17) << "t,s,value\n";
  const double q = static_cast<double>(grid.resolution());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    for (std::size_t j = 0; j < grid.points(); ++j) {
      out << static_cast<double>(i) / q << ',' << static_cast<double>(j) / q << ',' << grid.at(i, j) << '\n';
    }
  }
}

ProcessSpec ProcessSpec::fbm(double hurst, double scale) {
  ProcessSpec s;
  s.family = Family::Fbm;
  s.hurst = hurst;
  s.scale = scale;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::sub_fbm(double hurst, double scale) {
  ProcessSpec s;
  s.family = Family::SubFbm;
  s.hurst = hurst;
  s.scale = scale;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::bi_fbm(double hurst, double k, double scale) {
  ProcessSpec s;
  s.family = Family::BiFbm;
  s.hurst = hurst;
  s.bifractional = k;
  s.scale = scale;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::fredholm(std::shared_ptr<const KernelGrid> kernel, double scale) {
  ProcessSpec s;
  s.family = Family::Fredholm;
  s.kernel = std::move(kernel);
  s.scale = scale;
  s.validate();
  return s;
}

ProcessSpec ProcessSpec::wiener_integral(std::shared_ptr<const frac::GridFunction> integrand, double hurst,
                                         double scale) {
  ProcessSpec s;
  s.family = Family::WienerIntegral;
  s.integrand = std::move(integrand);
  s.hurst = hurst;
  s.scale = scale;
  s.validate();
  return s;
}

void ProcessSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale C must be positive");
  switch (family) {
    case Family::Fbm:
      if (!(hurst > 0.0 && hurst <= 1.0)) throw DomainError("fBm requires H in (0,1]");
      break;
    case Family::SubFbm:
    case Family::WienerIntegral:
      require_open_hurst(hurst);
      break;
    case Family::BiFbm:
      require_open_hurst(hurst);
      if (!(bifractional > 0.0 && bifractional <= 1.0)) throw DomainError("bi-fBm requires K in (0,1]");
      break;
    case Family::Fredholm:
      break;
  }
  if (family == Family::Fredholm && !kernel) throw ParameterError("Fredholm spec requires a kernel grid");
  if (family == Family::WienerIntegral && !integrand) throw ParameterError("Wiener-integral spec requires an integrand");
}

nlohmann::json to_json(const ProcessSpec& spec) {
  return nlohmann::json{{"family", to_string(spec.family)}, {"H", spec.hurst},
                        {"K", spec.bifractional},           {"C", spec.scale},
                        {"kernel_file", spec.kernel_file},   {"integrand_file", spec.integrand_file}};
}

ProcessSpec spec_from_json(const nlohmann::json& j, const std::string& base_dir) {
  if (!j.is_object() || !j.contains("family")) throw FormatError("process spec needs a 'family' field");
  ProcessSpec s;
  try {
    s.family = family_from_string(j.at("family").get<std::string>());
    s.hurst = j.value("H", 0.5);
    s.bifractional = j.value("K", 1.0);
    s.scale = j.value("C", 1.0);
    s.kernel_file = j.value("kernel_file", std::string{});
    s.integrand_file = j.value("integrand_file", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("process spec: ") + e.what());
  }
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path.string() : (std::filesystem::path(base_dir) / path).string();
  };
  if (s.family == Family::Fredholm) {
    if (s.kernel_file.empty()) throw FormatError("Fredholm spec needs kernel_file");
    s.kernel = std::make_shared<const KernelGrid>(load_kernel_grid(resolve(s.kernel_file)));
  }
  if (s.family == Family::WienerIntegral) {
    if (s.integrand_file.empty()) throw FormatError("Wiener-integral spec needs integrand_file");
    s.integrand = std::make_shared<const frac::GridFunction>(frac::load_grid_function(resolve(s.integrand_file)));
  }
  s.validate();
  return s;
}

nlohmann::json to_json(const HolderCertificate& cert) {
  auto witness = [](const Witness& w) { return nlohmann::json{{"t", w.t}, {"s", w.s}, {"ratio", w.ratio}}; };
  return nlohmann::json{{"C1", cert.c1},
                        {"H1", cert.h1},
                        {"C2", cert.c2},
                        {"H2", cert.h2},
                        {"grid_size", cert.grid_size},
                        {"passed", cert.passed},
                        {"worst_lower_pair", witness(cert.worst_lower_pair)},
                        {"worst_upper_pair", witness(cert.worst_upper_pair)}};
}

double fbm_cov(double t, double s, double hurst) {
  if (!(hurst > 0.0 && hurst <= 1.0)) throw DomainError("fBm requires H in (0,1]");
  require_times(t, s);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

double subfbm_cov(double t, double s, double hurst) {
  require_open_hurst(hurst);
  require_times(t, s);
  const double e = 2.0 * hurst;
  return std::pow(t, e) + std::pow(s, e) - 0.5 * (std::pow(t + s, e) + std::pow(std::abs(t - s), e));
}

double bifbm_cov(double t, double s, double hurst, double k) {
  require_open_hurst(hurst);
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("bi-fBm requires K in (0,1]");
  require_times(t, s);
  const double e = 2.0 * hurst;
  return std::pow(2.0, -k) * (std::pow(std::pow(t, e) + std::pow(s, e), k) - std::pow(std::abs(t - s), e * k));
}

double limit_cov_H_to_0(double t, double s) {
  require_times(t, s);
  if (t == 0.0 || s == 0.0) return 0.0;
  return t == s ? 1.0 : 0.5;
}

double covariance(const ProcessSpec& spec, double t, double s) {
  const double c2 = spec.scale * spec.scale;
  switch (spec.family) {
    case Family::Fbm: return c2 * fbm_cov(t, s, spec.hurst);
    case Family::SubFbm: return c2 * subfbm_cov(t, s, spec.hurst);
    case Family::BiFbm: return c2 * bifbm_cov(t, s, spec.hurst, spec.bifractional);
    case Family::Fredholm: {
      const auto a = kernel_row(*spec.kernel, t);
      const auto b = kernel_row(*spec.kernel, s);
      return c2 * trapezoid(spec.kernel->resolution(), [&](std::size_t k) { return a[k] * b[k]; });
    }
    case Family::WienerIntegral: return c2 * frac::wiener_integral_cov(*spec.integrand, t, s, spec.hurst);
  }
  throw ParameterError("unknown family");
}

std::vector<double> covariance_matrix(const ProcessSpec& spec, std::span<const double> times) {
  const std::size_t n = times.size();
  if (spec.family == Family::WienerIntegral) {
    auto cov = frac::wiener_integral_cov_matrix(*spec.integrand, spec.hurst, times);
    for (double& c : cov) c *= spec.scale * spec.scale;
    return cov;
  }
  std::vector<double> cov(n * n);
  if (spec.family == Family::Fredholm) {
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (double t : times) rows.push_back(kernel_row(*spec.kernel, t));
    const std::size_t q = spec.kernel->resolution();
    const double c2 = spec.scale * spec.scale;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double c = c2 * trapezoid(q, [&](std::size_t k) { return rows[i][k] * rows[j][k]; });
        cov[i * n + j] = cov[j * n + i] = c;
      }
    }
    return cov;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) cov[i * n + j] = cov[j * n + i] = covariance(spec, times[i], times[j]);
  }
  return cov;
}

double fredholm_increment_sq(const KernelGrid& grid, std::size_t t_idx, std::size_t s_idx) {
  if (t_idx >= grid.points() || s_idx >= grid.points()) throw ShapeError("kernel grid index out of range");
  if (t_idx == s_idx) return 0.0;
  const auto a = grid.row(t_idx);
  const auto b = grid.row(s_idx);
  return trapezoid(grid.resolution(), [&](std::size_t k) {
    const double d = a[k] - b[k];
    return d * d;
  });
}

double increment_l2(const ProcessSpec& spec, double t, double s) {
  require_times(t, s);
  if (t == s) return 0.0;
  switch (spec.family) {
    case Family::Fbm:
      spec.validate();
      return spec.scale * std::pow(std::abs(t - s), spec.hurst);
    case Family::Fredholm: {
      const double times[] = {t, s};
      return increment_matrix(spec, times)[1];
    }
    case Family::WienerIntegral:
      return spec.scale * frac::wiener_integral_increment(*spec.integrand, t, s, spec.hurst);
    default:
      return checked_sqrt(covariance(spec, t, t) + covariance(spec, s, s) - 2.0 * covariance(spec, t, s));
  }
}

HolderCertificate certify_quasihelix(const ProcessSpec& spec, double c1, double h1, double c2, double h2,
                                     std::size_t grid_size) {
  if (grid_size < 2) throw ParameterError("certification grid needs at least two points");
  for (double v : {c1, h1, c2, h2}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("Hoelder constants must be positive");
  }
  spec.validate();
  const auto grid = uniform_grid(grid_size);
  const auto inc = increment_matrix(spec, grid);

  HolderCertificate cert{c1, h1, c2, h2, grid_size, false, {}, {}};
  cert.worst_lower_pair.ratio = std::numeric_limits<double>::infinity();
  cert.worst_upper_pair.ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    for (std::size_t j = i + 1; j < grid_size; ++j) {
      const double dist = grid[j] - grid[i];
      const double norm = inc[i * grid_size + j];
      const double lower = norm / std::pow(dist, h1);
      const double upper = norm / std::pow(dist, h2);
      if (lower < cert.worst_lower_pair.ratio) cert.worst_lower_pair = {grid[j], grid[i], lower};
      if (upper > cert.worst_upper_pair.ratio) cert.worst_upper_pair = {grid[j], grid[i], upper};
    }
  }
  cert.passed = cert.worst_lower_pair.ratio >= c1 * (1.0 - kCertificationTolerance) &&
                cert.worst_upper_pair.ratio <= c2 * (1.0 + kCertificationTolerance);
  return cert;
}

double min_covariance_eigenvalue(const ProcessSpec& spec, std::size_t points) {
  if (points < 2) throw ParameterError("need at least two points");
  const auto grid = uniform_grid(points);
  const auto cov = covariance_matrix(spec, grid);
  const Eigen::Map<const Eigen::MatrixXd> m(cov.data(), static_cast<Eigen::Index>(points),
                                            static_cast<Eigen::Index>(points));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace gmax::kernels
