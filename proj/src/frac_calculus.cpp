#include "gmax/frac_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "csv.hpp"
#include "gmax/error.hpp"

namespace gmax::frac {
namespace {

void require_order(double alpha, double lo, double hi, bool lo_open, bool hi_open, const char* what) {
  const bool ok = (lo_open ? alpha > lo : alpha >= lo) && (hi_open ? alpha < hi : alpha <= hi);
  if (!ok || !std::isfinite(alpha)) throw DomainError(std::string(what) + ": order out of range");
}

void require_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0,1)");
}

// Weights for int_{v_k}^{v_{k+1}} phi(v) (v - u_j)^(order-1) dv with phi linear
// on the cell and d = k - j >= 0:  phi_k * lead[d] + phi_{k+1} * trail[d].
struct CellWeights {
  std::vector<double> lead;
  std::vector<double> trail;
};

CellWeights cell_weights(double order, std::size_t q) {
  const double h = 1.0 / static_cast<double>(q);
  const double ha = std::pow(h, order);
  CellWeights w;
  w.lead.resize(q);
  w.trail.resize(q);
  double p_lo = 0.0, q_lo = 0.0;
  for (std::size_t d = 0; d < q; ++d) {
    const double dd = static_cast<double>(d);
    const double p_hi = std::pow(dd + 1.0, order);
    const double q_hi = std::pow(dd + 1.0, order + 1.0);
    // Moments in units of h: m0 = int (d+x)^(a-1) dx, m1 = int (d+x)^(a-1) x dx over x in [0,1].
    const double m0 = (p_hi - p_lo) / order;
    const double m1 = (q_hi - q_lo) / (order + 1.0) - dd * m0;
    w.lead[d] = ha * (m0 - m1);
    w.trail[d] = ha * m1;
    p_lo = p_hi;
    q_lo = q_hi;
  }
  return w;
}

// A_j = (1/Gamma(order)) int_{max(u_j, v_begin)}^{v_end} v^power f(v) (v - u_j)^(order-1) dv
// for every node j, with v^power f(v) piecewise linear except on the cell
// [0,h] at j = 0, where v^(power+order-1) is integrated exactly against the
// linear interpolant of f.
std::vector<double> rl_window(std::span<const double> f, double order, double power, std::size_t begin,
                              std::size_t end) {
  const std::size_t q = f.size() - 1;
  const double h = 1.0 / static_cast<double>(q);
  std::vector<double> out(q + 1, 0.0);
  if (end <= begin) return out;

  std::vector<double> phi(q + 1, 0.0);
  for (std::size_t k = std::max<std::size_t>(begin, 1); k <= end; ++k) {
    phi[k] = (power == 0.0 ? 1.0 : std::pow(static_cast<double>(k) * h, power)) * f[k];
  }
  if (begin == 0 && power == 0.0) phi[0] = f[0];

  const CellWeights w = cell_weights(order, q);
  for (std::size_t j = 0; j < end; ++j) {
    const std::size_t lo = std::max(j, begin);
    double acc = 0.0;
    for (std::size_t k = lo; k < end; ++k) {
      const std::size_t d = k - j;
      acc += w.lead[d] * phi[k] + w.trail[d] * phi[k + 1];
    }
    out[j] = acc;
  }
  if (begin == 0 && power != 0.0) {
    // Replace the cell [0,h] at j = 0 by the exact weight v^e, e = power + order - 1 > -1.
    const double e = power + order - 1.0;
    const double m0 = std::pow(h, e + 1.0) / (e + 1.0);
    const double m1 = std::pow(h, e + 2.0) / (e + 2.0);
    const double wrong = w.lead[0] * phi[0] + w.trail[0] * phi[1];
    const double exact = f[0] * (m0 - m1 / h) + f[1] * (m1 / h);
    out[0] += exact - wrong;
  }
  const double inv_gamma = 1.0 / std::tgamma(order);
  for (double& a : out) a *= inv_gamma;
  return out;
}

// int_{u_k}^{u_{k+1}} u^beta psi(u) du with psi linear: node weights.
std::vector<double> power_node_weights(double beta, std::size_t q) {
  const double h = 1.0 / static_cast<double>(q);
  std::vector<double> w(q + 1, 0.0);
  const double scale = std::pow(h, beta + 1.0);
  double a_lo = 0.0, b_lo = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double kk = static_cast<double>(k);
    const double a_hi = std::pow(kk + 1.0, beta + 1.0);
    const double b_hi = std::pow(kk + 1.0, beta + 2.0);
    const double m0 = (a_hi - a_lo) / (beta + 1.0);
    const double m1 = (b_hi - b_lo) / (beta + 2.0) - kk * m0;
    w[k] += scale * (m0 - m1);
    w[k + 1] += scale * m1;
    a_lo = a_hi;
    b_lo = b_hi;
  }
  return w;
}

// int_{u_k}^{u_{k+1}} u^beta du for every cell.
std::vector<double> power_cell_weights(double beta, std::size_t q) {
  const double h = 1.0 / static_cast<double>(q);
  std::vector<double> w(q);
  const double scale = std::pow(h, beta + 1.0) / (beta + 1.0);
  double lo = 0.0;
  for (std::size_t k = 0; k < q; ++k) {
    const double hi = std::pow(static_cast<double>(k) + 1.0, beta + 1.0);
    w[k] = scale * (hi - lo);
    lo = hi;
  }
  return w;
}

}  // namespace

GridFunction::GridFunction(std::vector<double> values, std::optional<std::vector<double>> derivative)
    : values_(std::move(values)), derivative_(std::move(derivative)) {
  if (values_.size() < 2) throw ShapeError("grid function needs at least two points");
  if (derivative_ && derivative_->size() != values_.size()) {
    throw ShapeError("derivative samples must match value samples");
  }
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(values_) || (derivative_ && !finite(*derivative_))) {
    throw DomainError("grid function values must be finite");
  }
}

GridFunction GridFunction::sample(std::size_t q, const std::function<double(double)>& f,
                                  const std::function<double(double)>& df) {
  if (q < 1) throw ShapeError("grid resolution must be at least 1");
  std::vector<double> v(q + 1);
  std::optional<std::vector<double>> d;
  if (df) d.emplace(q + 1);
  for (std::size_t i = 0; i <= q; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(q);
    v[i] = f(t);
    if (d) (*d)[i] = df(t);
  }
  return GridFunction(std::move(v), std::move(d));
}

std::size_t GridFunction::index_of(double t) const {
  const double scaled = t * static_cast<double>(resolution());
  const double idx = std::round(scaled);
  if (!(t >= 0.0 && t <= 1.0) || std::abs(scaled - idx) > 1e-9) {
    throw ParameterError("time " + std::to_string(t) + " is not a grid point");
  }
  return static_cast<std::size_t>(idx);
}

GridFunction load_grid_function(const std::string& path) {
  const auto table = detail::read_numeric_csv(path);
  const auto& h = table.header;
  const bool with_derivative = h.size() == 3 && h[2] == "derivative";
  if (!((h.size() == 2 || with_derivative) && h[0] == "t" && h[1] == "value")) {
    throw FormatError(path + ": header must be t,value[,derivative]");
  }
  const std::size_t n = table.rows.size();
  if (n < 2) throw FormatError(path + ": need at least two rows");
  std::vector<double> values(n);
  std::optional<std::vector<double>> deriv;
  if (with_derivative) deriv.emplace(n);
  const double q = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(table.rows[i][0] - static_cast<double>(i) / q) > 1e-9) {
      throw FormatError(path + ": t column must be the uniform grid i/" + std::to_string(n - 1));
    }
    values[i] = table.rows[i][1];
    if (deriv) (*deriv)[i] = table.rows[i][2];
  }
  return GridFunction(std::move(values), std::move(deriv));
}

void save_grid_function(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << std::setprecision(17);
  out << (f.derivative() ? "t,value,derivative\n" : "t,value\n");
  for (std::size_t i = 0; i <= f.resolution(); ++i) {
    out << f.point(i) << ',' << f[i];
    if (f.derivative()) out << ',' << (*f.derivative())[i];
    out << '\n';
  }
}

std::vector<double> rl_integral_right_grid(const GridFunction& f, double alpha) {
  require_order(alpha, 0.0, 1.0, true, false, "rl_integral_right");
  return rl_window(f.values(), alpha, 0.0, 0, f.resolution());
}

double rl_integral_right(const GridFunction& f, double alpha, double t) {
  const std::size_t j = f.index_of(t);
  return rl_integral_right_grid(f, alpha)[j];
}

double rl_identity(const GridFunction& f, double t) { return f[f.index_of(t)]; }

double rl_derivative_right(const GridFunction& f, double alpha, double t) {
  require_order(alpha, -1.0, 0.0, true, true, "rl_derivative_right");
  const std::size_t j = f.index_of(t);
  const auto a = rl_window(f.values(), alpha + 1.0, 0.0, 0, f.resolution());
  const std::size_t q = f.resolution();
  const double h = f.spacing();
  if (j == 0) return -(a[1] - a[0]) / h;
  if (j == q) return -(a[q] - a[q - 1]) / h;
  return -(a[j + 1] - a[j - 1]) / (2.0 * h);
}

double c_H(double hurst) {
  require_hurst(hurst);
  return std::sqrt(2.0 * hurst * std::tgamma(1.5 - hurst) / (std::tgamma(2.0 - 2.0 * hurst) * std::tgamma(hurst + 0.5)));
}

double transfer_constant(double hurst) { return c_H(hurst) * std::tgamma(hurst + 0.5); }

TransferImage::TransferImage(double hurst, double constant, std::vector<double> regular, std::vector<double> nodal)
    : hurst_(hurst), constant_(constant), regular_(std::move(regular)), nodal_(std::move(nodal)) {
  if (regular_.size() < 2 || nodal_.size() != regular_.size()) throw ShapeError("transfer image shape mismatch");
}

TransferImage TransferImage::operator-(const TransferImage& other) const {
  if (other.hurst_ != hurst_ || other.regular_.size() != regular_.size()) {
    throw ShapeError("transfer images differ in H or resolution");
  }
  std::vector<double> r(regular_.size()), n(nodal_.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = regular_[i] - other.regular_[i];
    n[i] = nodal_[i] - other.nodal_[i];
  }
  return TransferImage(hurst_, constant_, std::move(r), std::move(n));
}

TransferImage kh_apply_window(const GridFunction& f, double hurst, std::size_t begin, std::size_t end) {
  require_hurst(hurst);
  const std::size_t q = f.resolution();
  if (begin > end || end > q) throw ParameterError("window must satisfy begin <= end <= resolution");
  const double k = transfer_constant(hurst);
  const double h = f.spacing();
  const double alpha = hurst - 0.5;
  std::vector<double> nodal(q + 1, 0.0);

  if (alpha > 0.0) {
    auto j = rl_window(f.values(), alpha, alpha, begin, end);
    for (std::size_t i = 0; i <= q; ++i) {
      if (i == 0) {
        nodal[0] = j[0] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), j[0]);
      } else {
        nodal[i] = k * std::pow(static_cast<double>(i) * h, -alpha) * j[i];
      }
    }
    return TransferImage(hurst, k, std::move(j), std::move(nodal));
  }

  auto a = rl_window(f.values(), alpha + 1.0, alpha, begin, end);
  if (alpha == 0.0) {
    for (std::size_t i = begin; i < end; ++i) nodal[i] = f[i];
    if (end == q && begin < end) nodal[q] = f[q];
  } else {
    for (std::size_t i = 1; i <= q; ++i) {
      const double slope = i == q ? (a[q] - a[q - 1]) / h : (a[i + 1] - a[i - 1]) / (2.0 * h);
      nodal[i] = -k * std::pow(static_cast<double>(i) * h, -alpha) * slope;
    }
  }
  return TransferImage(hurst, k, std::move(a), std::move(nodal));
}

TransferImage kh_apply(const GridFunction& f, double hurst) { return kh_apply_window(f, hurst, 0, f.resolution()); }

double transfer_inner(const TransferImage& a, const TransferImage& b) {
  if (a.hurst_ != b.hurst_ || a.regular_.size() != b.regular_.size()) {
    throw ShapeError("transfer images differ in H or resolution");
  }
  const std::size_t q = a.resolution();
  const double alpha = a.hurst_ - 0.5;
  const double k2 = a.constant_ * a.constant_;
  double acc = 0.0;
  if (alpha > 0.0) {
    const auto w = power_node_weights(-2.0 * alpha, q);
    for (std::size_t i = 0; i <= q; ++i) acc += w[i] * a.regular_[i] * b.regular_[i];
  } else {
    const auto w = power_cell_weights(-2.0 * alpha, q);
    const double inv_h = static_cast<double>(q);
    for (std::size_t i = 0; i < q; ++i) {
      const double da = (a.regular_[i + 1] - a.regular_[i]) * inv_h;
      const double db = (b.regular_[i + 1] - b.regular_[i]) * inv_h;
      acc += w[i] * da * db;
    }
  }
  const double result = k2 * acc;
  if (!std::isfinite(result)) throw ConsistencyError("transfer inner product is not finite (K^H f not in L2?)");
  return result;
}

double wiener_integral_cov(const GridFunction& f, double t, double s, double hurst) {
  const std::size_t ti = f.index_of(t);
  const std::size_t si = f.index_of(s);
  if (ti == 0 || si == 0) return 0.0;
  const auto kt = kh_apply_window(f, hurst, 0, ti);
  if (ti == si) return transfer_inner(kt, kt);
  return transfer_inner(kt, kh_apply_window(f, hurst, 0, si));
}

std::vector<double> wiener_integral_cov_matrix(const GridFunction& f, double hurst, std::span<const double> times) {
  const std::size_t n = times.size();
  std::vector<TransferImage> images;
  images.reserve(n);
  for (double t : times) images.push_back(kh_apply_window(f, hurst, 0, f.index_of(t)));
  std::vector<double> cov(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double c = transfer_inner(images[i], images[j]);
      cov[i * n + j] = c;
      cov[j * n + i] = c;
    }
  }
  return cov;
}

double wiener_integral_increment(const GridFunction& f, double t, double s, double hurst) {
  std::size_t lo = f.index_of(t);
  std::size_t hi = f.index_of(s);
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) return 0.0;
  const auto diff = kh_apply_window(f, hurst, lo, hi);
  return std::sqrt(std::max(0.0, transfer_inner(diff, diff)));
}

SufficientConditionReport check_sufficient_conditions(const GridFunction& f, double hurst, double c) {
  require_hurst(hurst);
  if (!(c > 0.0)) throw DomainError("constant c must be positive");
  SufficientConditionReport report;
  const std::size_t q = f.resolution();
  if (hurst < 0.5) {
    if (!f.derivative()) throw ParameterError("derivative samples are required for H < 1/2");
    const double h = hurst - 0.5;
    const auto& df = *f.derivative();
    for (std::size_t i = 0; i <= q; ++i) {
      const double t = f.point(i);
      const double shifted = f[i] - t * df[i] / h;
      if (!report.left_witness && (f[i] < c || shifted < c)) report.left_witness = t;
      if (!report.right_witness && (std::abs(f[i]) > c || std::abs(shifted) > c)) report.right_witness = t;
    }
  } else {
    std::optional<double> below, above;
    for (std::size_t i = 0; i <= q; ++i) {
      const double t = f.point(i);
      if (!below && f[i] < c) below = t;
      if (!above && f[i] > -c) above = t;
      if (!report.right_witness && std::abs(f[i]) > c) report.right_witness = t;
    }
    // Left condition holds with either sign; report the positive-branch witness.
    if (below && above) report.left_witness = below;
  }
  report.left_ok = !report.left_witness;
  report.right_ok = !report.right_witness;
  return report;
}

}  // namespace gmax::frac
