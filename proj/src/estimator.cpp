#include "gmax/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "gmax/error.hpp"
#include "gmax/parallel.hpp"

namespace gmax::estimator {
namespace {

struct Moments {
  double mean = 0.0;
  double std_error = 0.0;
};

std::vector<double> observations(std::span<const double> per_path, bool antithetic) {
  if (!antithetic) return {per_path.begin(), per_path.end()};
  std::vector<double> obs(per_path.size() / 2);
  for (std::size_t j = 0; j < obs.size(); ++j) obs[j] = 0.5 * (per_path[2 * j] + per_path[2 * j + 1]);
  return obs;
}

Moments moments(std::span<const double> per_path, bool antithetic) {
  const auto obs = observations(per_path, antithetic);
  if (obs.size() < 2) throw ParameterError("need at least two independent observations");
  const double k = static_cast<double>(obs.size());
  const double mean = pairwise_sum(obs) / k;
  std::vector<double> sq(obs.size());
  for (std::size_t j = 0; j < obs.size(); ++j) sq[j] = (obs[j] - mean) * (obs[j] - mean);
  const double var = pairwise_sum(sq) / (k - 1.0);
  return {mean, std::sqrt(var / k)};
}

void check_plan(std::size_t m, bool antithetic) {
  if (m < 2) throw ParameterError("need at least two paths");
  if (antithetic && (m < 4 || m % 2 != 0)) {
    throw ParameterError("antithetic estimation needs an even path count of at least 4");
  }
}

std::unique_ptr<sampling::PathGenerator> generator_for(const kernels::ProcessSpec& spec, std::size_t n) {
  return sampling::make_generator(spec, n);
}

}  // namespace

double grid_max(std::span<const double> path) {
  if (path.empty()) throw ShapeError("grid_max of an empty path");
  return *std::max_element(path.begin(), path.end());
}

double normal_quantile_two_sided(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0,1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * level);
}

MaxEstimate summarize(std::span<const double> per_path, bool antithetic, double ci_level) {
  const double z = normal_quantile_two_sided(ci_level);
  const auto mo = moments(per_path, antithetic);
  MaxEstimate est;
  est.mean = mo.mean;
  est.std_error = mo.std_error;
  est.ci_level = ci_level;
  est.half_width = z * mo.std_error;
  est.m = per_path.size();
  return est;
}

MaxEstimate estimate_expected_max(const sampling::PathGenerator& generator, std::size_t m, std::uint64_t seed,
                                  double ci_level, const Options& options) {
  check_plan(m, options.antithetic);
  normal_quantile_two_sided(ci_level);
  std::vector<double> maxima(m);
  sampling::visit_paths(generator, {m, seed, options.antithetic}, options.threads,
                        [&](std::size_t p, std::span<const double> v) { maxima[p] = grid_max(v); });
  auto est = summarize(maxima, options.antithetic, ci_level);
  est.n = generator.n();
  est.seed = seed;
  return est;
}

MaxEstimate estimate_expected_max(const kernels::ProcessSpec& spec, std::size_t n, std::size_t m,
                                  std::uint64_t seed, double ci_level, const Options& options) {
  check_plan(m, options.antithetic);
  normal_quantile_two_sided(ci_level);
  return estimate_expected_max(*generator_for(spec, n), m, seed, ci_level, options);
}

std::vector<MaxEstimate> estimate_expected_max_nested(const kernels::ProcessSpec& spec,
                                                      std::span<const std::size_t> ns, std::size_t m,
                                                      std::uint64_t seed, double ci_level, const Options& options) {
  if (ns.empty()) throw ParameterError("empty resolution list");
  check_plan(m, options.antithetic);
  normal_quantile_two_sided(ci_level);
  const std::size_t fine = *std::max_element(ns.begin(), ns.end());
  for (std::size_t n : ns) {
    if (n < 1 || fine % n != 0) {
      throw ParameterError("resolution " + std::to_string(n) + " does not divide " + std::to_string(fine));
    }
  }
  const auto generator = generator_for(spec, fine);
  std::vector<double> maxima(ns.size() * m);
  sampling::visit_paths(*generator, {m, seed, options.antithetic}, options.threads,
                        [&](std::size_t p, std::span<const double> v) {
                          for (std::size_t c = 0; c < ns.size(); ++c) {
                            const std::size_t step = fine / ns[c];
                            double best = v[0];
                            for (std::size_t i = step; i <= fine; i += step) best = std::max(best, v[i]);
                            maxima[c * m + p] = best;
                          }
                        });
  std::vector<MaxEstimate> out;
  out.reserve(ns.size());
  for (std::size_t c = 0; c < ns.size(); ++c) {
    auto est = summarize(std::span<const double>(maxima).subspan(c * m, m), options.antithetic, ci_level);
    est.n = ns[c];
    est.seed = seed;
    out.push_back(est);
  }
  return out;
}

std::vector<GapEstimate> estimate_gaps(const kernels::ProcessSpec& spec, std::span<const std::size_t> coarse_ns,
                                       std::size_t fine_n, std::size_t m, std::uint64_t seed,
                                       const Options& options) {
  check_plan(m, options.antithetic);
  if (fine_n < 1) throw ParameterError("fine resolution must be at least 1");
  for (std::size_t n : coarse_ns) {
    if (n < 1 || fine_n % n != 0) {
      throw ParameterError("coarse resolution " + std::to_string(n) + " does not divide fine resolution " +
                           std::to_string(fine_n));
    }
  }
  const auto generator = generator_for(spec, fine_n);
  const std::size_t k = coarse_ns.size();
  std::vector<double> gaps(k * m);
  sampling::visit_paths(*generator, {m, seed, options.antithetic}, options.threads,
                        [&](std::size_t p, std::span<const double> v) {
                          const double fine_max = grid_max(v);
                          for (std::size_t c = 0; c < k; ++c) {
                            const std::size_t step = fine_n / coarse_ns[c];
                            double coarse_max = v[0];
                            for (std::size_t i = step; i <= fine_n; i += step) coarse_max = std::max(coarse_max, v[i]);
                            gaps[c * m + p] = fine_max - coarse_max;
                          }
                        });
  std::vector<GapEstimate> out;
  out.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto slice = std::span<const double>(gaps).subspan(c * m, m);
    const auto mo = moments(slice, options.antithetic);
    GapEstimate g;
    g.coarse_n = coarse_ns[c];
    g.fine_n = fine_n;
    g.mean_gap = mo.mean;
    g.std_error = mo.std_error;
    g.min_path_gap = *std::min_element(slice.begin(), slice.end());
    g.m = m;
    out.push_back(g);
  }
  return out;
}

GapEstimate estimate_gap(const kernels::ProcessSpec& spec, std::size_t coarse_n, std::size_t fine_n, std::size_t m,
                         std::uint64_t seed, const Options& options) {
  const std::size_t coarse[] = {coarse_n};
  return estimate_gaps(spec, coarse, fine_n, m, seed, options).front();
}

nlohmann::json to_json(const MaxEstimate& estimate, const kernels::ProcessSpec& spec) {
  return {{"spec", kernels::to_json(spec)}, {"n", estimate.n},
          {"m", estimate.m},                {"seed", estimate.seed},
          {"mean", estimate.mean},          {"stderr", estimate.std_error},
          {"ci_level", estimate.ci_level},  {"half_width", estimate.half_width}};
}

}  // namespace gmax::estimator
