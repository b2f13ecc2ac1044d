#include "gmax/sampling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include <Eigen/Dense>

#include "fft.hpp"
#include "gmax/error.hpp"
#include "gmax/parallel.hpp"

namespace gmax::sampling {
namespace {

constexpr char kMagic[8] = {'G', 'M', 'A', 'X', 'P', 'B', '0', '1'};

class FbmGenerator final : public PathGenerator {
 public:
  FbmGenerator(std::size_t n, double hurst, double scale)
      : n_(n), scale_(scale * std::pow(static_cast<double>(n), -hurst)), fft_(2 * n) {
    const auto spectrum = circulant_spectrum(n, hurst);
    amplitude_.resize(2 * n);
    const double norm = 1.0 / static_cast<double>(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) amplitude_[k] = std::sqrt(spectrum.eigenvalues[k] * norm);
  }

  std::size_t n() const noexcept override { return n_; }

  std::unique_ptr<PathWorker> make_worker() const override { return std::make_unique<Worker>(*this); }

 private:
  class Worker final : public PathWorker {
   public:
    explicit Worker(const FbmGenerator& g) : g_(g), buffer_(2 * g.n_), normals_(4 * g.n_) {}

    void draw(NormalStream& stream, std::span<double> first, std::span<double> second) override {
      stream.fill(normals_);
      auto data = buffer_.data();
      for (std::size_t k = 0; k < data.size(); ++k) {
        data[k] = g_.amplitude_[k] * std::complex<double>(normals_[2 * k], normals_[2 * k + 1]);
      }
      g_.fft_.execute(buffer_);
      double a = 0.0, b = 0.0;
      first[0] = 0.0;
      second[0] = 0.0;
      for (std::size_t i = 0; i < g_.n_; ++i) {
        a += data[i].real();
        b += data[i].imag();
        first[i + 1] = g_.scale_ * a;
        second[i + 1] = g_.scale_ * b;
      }
    }

   private:
    const FbmGenerator& g_;
    detail::FftBuffer buffer_;
    std::vector<double> normals_;
  };

  std::size_t n_;
  double scale_;
  std::vector<double> amplitude_;
  detail::ForwardFft fft_;
};

// B^1_t = xi t: the fBm at H = 1 is a ray with standard normal slope.
class RayGenerator final : public PathGenerator {
 public:
  RayGenerator(std::size_t n, double scale) : n_(n), scale_(scale) {}
  std::size_t n() const noexcept override { return n_; }
  std::unique_ptr<PathWorker> make_worker() const override { return std::make_unique<Worker>(*this); }

 private:
  class Worker final : public PathWorker {
   public:
    explicit Worker(const RayGenerator& g) : g_(g) {}
    void draw(NormalStream& stream, std::span<double> first, std::span<double> second) override {
      const double xa = stream.next();
      const double xb = stream.next();
      const double inv_n = 1.0 / static_cast<double>(g_.n_);
      for (std::size_t i = 0; i <= g_.n_; ++i) {
        const double t = static_cast<double>(i) * inv_n;
        first[i] = g_.scale_ * xa * t;
        second[i] = g_.scale_ * xb * t;
      }
    }

   private:
    const RayGenerator& g_;
  };

  std::size_t n_;
  double scale_;
};

class CholeskyGenerator final : public PathGenerator {
 public:
  CholeskyGenerator(const kernels::ProcessSpec& spec, std::size_t n) : n_(n) {
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i + 1) / static_cast<double>(n);
    const auto cov = kernels::covariance_matrix(spec, times);
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd sigma = Eigen::Map<const Eigen::MatrixXd>(cov.data(), dim, dim);
    Eigen::MatrixXd shifted = sigma;
    shifted.diagonal().array() += 1e-12;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      factor_ = llt.matrixL();
      triangular_ = true;
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    const double level = std::max(1.0, sigma.diagonal().mean());
    const double min_eig = eig.eigenvalues().minCoeff();
    if (eig.info() != Eigen::Success || min_eig < -1e-8 * level) {
      throw NotPsdError("grid covariance is not positive semidefinite (min eigenvalue " + std::to_string(min_eig) +
                        ")");
    }
    factor_ = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    triangular_ = false;
  }

  std::size_t n() const noexcept override { return n_; }
  std::unique_ptr<PathWorker> make_worker() const override { return std::make_unique<Worker>(*this); }

 private:
  class Worker final : public PathWorker {
   public:
    explicit Worker(const CholeskyGenerator& g) : g_(g), z_(static_cast<Eigen::Index>(g.n_)), x_(z_.size()) {}

    void draw(NormalStream& stream, std::span<double> first, std::span<double> second) override {
      fill(stream, first);
      fill(stream, second);
    }

   private:
    void fill(NormalStream& stream, std::span<double> out) {
      stream.fill(std::span<double>(z_.data(), static_cast<std::size_t>(z_.size())));
      if (g_.triangular_) {
        x_.noalias() = g_.factor_.triangularView<Eigen::Lower>() * z_;
      } else {
        x_.noalias() = g_.factor_ * z_;
      }
      out[0] = 0.0;
      std::copy(x_.data(), x_.data() + x_.size(), out.begin() + 1);
    }

    const CholeskyGenerator& g_;
    Eigen::VectorXd z_;
    Eigen::VectorXd x_;
  };

  std::size_t n_;
  Eigen::MatrixXd factor_;
  bool triangular_ = true;
};

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw FormatError("truncated path batch");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

PathBatch collect(const PathGenerator& generator, const kernels::ProcessSpec& spec, std::size_t m,
                  std::uint64_t seed, bool antithetic, unsigned threads) {
  PathBatch batch;
  batch.n = generator.n();
  batch.m = m;
  batch.seed = seed;
  batch.antithetic = antithetic;
  batch.spec = spec;
  batch.values.assign(m * (batch.n + 1), 0.0);
  visit_paths(generator, PathPlan{m, seed, antithetic}, threads, [&](std::size_t p, std::span<const double> v) {
    std::copy(v.begin(), v.end(), batch.values.begin() + static_cast<std::ptrdiff_t>(p * (batch.n + 1)));
  });
  return batch;
}

}  // namespace

double fgn_autocovariance(std::uint64_t k, double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("fGn requires H in (0,1)");
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e));
}

CirculantSpectrum circulant_spectrum(std::size_t n, double hurst) {
  if (n < 1) throw ParameterError("circulant embedding needs n >= 1");
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("circulant embedding requires H in (0,1)");
  const std::size_t len = 2 * n;
  detail::FftBuffer buffer(len);
  auto data = buffer.data();
  for (std::size_t k = 0; k <= n; ++k) data[k] = fgn_autocovariance(k, hurst);
  for (std::size_t k = n + 1; k < len; ++k) data[k] = data[len - k];
  detail::ForwardFft(len).execute(buffer);

  CirculantSpectrum spectrum;
  spectrum.n = n;
  spectrum.hurst = hurst;
  spectrum.eigenvalues.resize(len);
  double max_abs = 0.0, max_imag = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    spectrum.eigenvalues[k] = data[k].real();
    max_abs = std::max(max_abs, std::abs(data[k].real()));
    max_imag = std::max(max_imag, std::abs(data[k].imag()));
  }
  if (max_imag > kEmbeddingTolerance * max_abs) {
    throw EmbeddingError("circulant transform has non-negligible imaginary part");
  }
  spectrum.min_eigenvalue = *std::min_element(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  if (spectrum.min_eigenvalue < -kEmbeddingTolerance * max_abs) {
    throw EmbeddingError("circulant embedding is not nonnegative definite (min eigenvalue " +
                         std::to_string(spectrum.min_eigenvalue) + ")");
  }
  for (double& ev : spectrum.eigenvalues) ev = std::max(ev, 0.0);
  return spectrum;
}

std::unique_ptr<PathGenerator> make_fbm_generator(std::size_t n, double hurst, double scale) {
  if (n < 1) throw ParameterError("grid resolution n must be at least 1");
  if (!(scale > 0.0)) throw DomainError("scale C must be positive");
  if (hurst == 1.0) return std::make_unique<RayGenerator>(n, scale);
  return std::make_unique<FbmGenerator>(n, hurst, scale);
}

std::unique_ptr<PathGenerator> make_cholesky_generator(const kernels::ProcessSpec& spec, std::size_t n) {
  if (n < 1) throw ParameterError("grid resolution n must be at least 1");
  spec.validate();
  return std::make_unique<CholeskyGenerator>(spec, n);
}

std::unique_ptr<PathGenerator> make_generator(const kernels::ProcessSpec& spec, std::size_t n) {
  spec.validate();
  if (spec.family == kernels::Family::Fbm) return make_fbm_generator(n, spec.hurst, spec.scale);
  return make_cholesky_generator(spec, n);
}

std::size_t draws_for(const PathPlan& plan) noexcept {
  const std::size_t per_draw = plan.antithetic ? 4 : 2;
  return (plan.paths + per_draw - 1) / per_draw;
}

void visit_paths(const PathGenerator& generator, const PathPlan& plan, unsigned threads,
                 const std::function<void(std::size_t, std::span<const double>)>& visitor) {
  if (plan.paths < 1) throw ParameterError("need at least one path");
  if (plan.antithetic && plan.paths % 2 != 0) throw ParameterError("antithetic sampling needs an even path count");
  const std::size_t len = generator.n() + 1;
  const std::size_t draws = draws_for(plan);
  std::vector<std::unique_ptr<PathWorker>> workers(std::max(1u, threads));

  parallel_for(draws, std::max(1u, threads), 4, [&](std::size_t begin, std::size_t end, unsigned w) {
    if (!workers[w]) workers[w] = generator.make_worker();
    std::vector<double> a(len), b(len), neg(len);
    for (std::size_t d = begin; d < end; ++d) {
      NormalStream stream(plan.seed, d);
      workers[w]->draw(stream, a, b);
      auto emit = [&](std::size_t p, const std::vector<double>& v) {
        if (p < plan.paths) visitor(p, v);
      };
      if (!plan.antithetic) {
        emit(2 * d, a);
        emit(2 * d + 1, b);
        continue;
      }
      emit(4 * d, a);
      std::transform(a.begin(), a.end(), neg.begin(), [](double x) { return -x; });
      emit(4 * d + 1, neg);
      emit(4 * d + 2, b);
      std::transform(b.begin(), b.end(), neg.begin(), [](double x) { return -x; });
      emit(4 * d + 3, neg);
    }
  });
}

PathBatch sample_fbm_paths(std::size_t n, std::size_t m, double hurst, std::uint64_t seed, bool antithetic,
                           unsigned threads) {
  const auto spec = kernels::ProcessSpec::fbm(hurst);
  return collect(*make_fbm_generator(n, hurst), spec, m, seed, antithetic, threads);
}

PathBatch sample_by_cholesky(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m, std::uint64_t seed,
                             bool antithetic, unsigned threads) {
  return collect(*make_cholesky_generator(spec, n), spec, m, seed, antithetic, threads);
}

PathBatch sample_paths(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m, std::uint64_t seed,
                       bool antithetic, unsigned threads) {
  return collect(*make_generator(spec, n), spec, m, seed, antithetic, threads);
}

void write_binary(const PathBatch& batch, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put_u64(out, batch.n);
  put_u64(out, batch.m);
  put_u64(out, batch.seed);
  for (double v : batch.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

PathBatch read_binary(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw FormatError("not a GMAXPB01 path batch");
  PathBatch batch;
  batch.n = get_u64(in);
  batch.m = get_u64(in);
  batch.seed = get_u64(in);
  batch.values.resize(batch.m * (batch.n + 1));
  for (double& v : batch.values) v = std::bit_cast<double>(get_u64(in));
  return batch;
}

void write_csv(const PathBatch& batch, std::ostream& out) {
  out << "path,i,t,value\n";
  char line[96];
  for (std::size_t p = 0; p < batch.m; ++p) {
    const auto row = batch.path(p);
    for (std::size_t i = 0; i <= batch.n; ++i) {
      std::snprintf(line, sizeof line, "%zu,%zu,%.17g,%.17g\n", p, i,
                    static_cast<double>(i) / static_cast<double>(batch.n), row[i]);
      out << line;
    }
  }
}

}  // namespace gmax::sampling
