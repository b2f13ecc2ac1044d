#include "gmax/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "gmax/bounds.hpp"
#include "gmax/error.hpp"
#include "gmax/estimator.hpp"
#include "gmax/gauss_inequalities.hpp"
#include "gmax/parallel.hpp"

namespace gmax::experiments {
namespace {

using nlohmann::json;

constexpr double kNa = NAN;

std::vector<double> h_range(int first, int last, int step, double unit) {
  std::vector<double> out;
  for (int i = first; i <= last; i += step) out.push_back(i * unit);
  return out;
}

std::vector<std::size_t> powers_of_two(int lo, int hi) {
  std::vector<std::size_t> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::size_t{1} << k);
  return out;
}

std::string join_row(std::initializer_list<std::string> cells) {
  std::string row;
  for (const auto& c : cells) {
    if (!row.empty()) row += ',';
    row += c;
  }
  return row + '\n';
}

std::string flag(bool ok) { return ok ? "1" : "0"; }

// CSV cells never carry commas or newlines.
std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return s;
}

std::string header(const ExperimentConfig& cfg) {
  return "# gmax " + std::string(to_string(cfg.experiment)) + " config_hash=" + config_hash(cfg) +
         " seed=" + std::to_string(cfg.seed) + "\n";
}

estimator::Options options(const ExperimentConfig& cfg) { return {cfg.antithetic, std::max(1u, cfg.threads)}; }

std::string fmt_h(double h) { return format_value(h); }

bool nested(const std::vector<std::size_t>& ns) {
  const std::size_t top = *std::max_element(ns.begin(), ns.end());
  return std::all_of(ns.begin(), ns.end(), [top](std::size_t n) { return n > 0 && top % n == 0; });
}

std::vector<estimator::MaxEstimate> estimates_over_n(const kernels::ProcessSpec& spec,
                                                     const std::vector<std::size_t>& ns, const ExperimentConfig& cfg) {
  if (nested(ns)) return estimator::estimate_expected_max_nested(spec, ns, cfg.paths, cfg.seed, cfg.ci_level, options(cfg));
  std::vector<estimator::MaxEstimate> out;
  for (std::size_t n : ns) {
    out.push_back(estimator::estimate_expected_max(spec, n, cfg.paths, cfg.seed, cfg.ci_level, options(cfg)));
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <class T>
T read(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::Fig1: return "fig1";
    case Experiment::Fig2: return "fig2";
    case Experiment::BoundsTable: return "bounds";
    case Experiment::DeltaStudy: return "delta";
    case Experiment::LimitH0: return "limit-h0";
    case Experiment::Thm3Demo: return "thm3";
    case Experiment::Certify: return "certify";
  }
  return "unknown";
}

Experiment experiment_from_string(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (key == "fig1") return Experiment::Fig1;
  if (key == "fig2") return Experiment::Fig2;
  if (key == "bounds" || key == "bounds-table") return Experiment::BoundsTable;
  if (key == "delta" || key == "delta-study") return Experiment::DeltaStudy;
  if (key == "limit-h0") return Experiment::LimitH0;
  if (key == "thm3" || key == "thm3-demo") return Experiment::Thm3Demo;
  if (key == "certify") return Experiment::Certify;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig cfg;
  cfg.experiment = e;
  cfg.threads = default_thread_count();
  switch (e) {
    case Experiment::Fig1:
      cfg.h_grid = h_range(1, 10, 1, 0.1);
      cfg.n_grid = powers_of_two(5, 16);
      cfg.paths = 20000;
      break;
    case Experiment::Fig2:
      cfg.h_grid = h_range(1, 9, 1, 0.1);
      cfg.n_grid = {65536};
      cfg.paths = 20000;
      break;
    case Experiment::BoundsTable:
      cfg.h_grid = h_range(1, 9, 1, 0.1);
      cfg.n_grid = {16, 256, 4096, 65536};
      break;
    case Experiment::DeltaStudy:
      cfg.h_grid = {0.5};
      cfg.n_grid = {16, 64, 256};
      cfg.paths = 4000;
      break;
    case Experiment::LimitH0:
      cfg.h_grid = {0.001, 0.01};
      cfg.n_grid = {16, 64};
      cfg.paths = 20000;
      break;
    case Experiment::Thm3Demo:
      cfg.h_grid = {0.5, 0.4, 0.3, 0.25, 0.2, 0.1, 0.05, 0.02};
      cfg.n_grid = {16};
      cfg.small_h_grid = {0.1, 0.01, 0.001};
      cfg.paths = 20000;
      break;
    case Experiment::Certify:
      cfg.spec = kernels::ProcessSpec::fbm(0.5);
      break;
  }
  for (double& h : cfg.h_grid) h = std::round(h * 1e12) / 1e12;
  return cfg;
}

ExperimentConfig config_from_json(const json& j, const std::string& base_dir) {
  try {
    require(j.is_object(), "configuration must be a JSON object");
    require(j.contains("experiment"), "configuration lacks 'experiment'");
    auto cfg = default_config(experiment_from_string(j.at("experiment").get<std::string>()));
    static const char* const kKeys[] = {"experiment", "h_grid",  "n_grid",       "paths", "seed",
                                        "ci_level",   "ci",      "output",       "threads", "antithetic",
                                        "scale",      "fine_n",  "small_h_grid", "spec",  "constants",
                                        "grid_size"};
    for (const auto& [key, value] : j.items()) {
      require(std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys),
              "unknown configuration key '" + key + "'");
    }
    cfg.h_grid = read(j, "h_grid", cfg.h_grid);
    cfg.n_grid = read(j, "n_grid", cfg.n_grid);
    cfg.paths = read(j, "paths", cfg.paths);
    cfg.seed = read(j, "seed", cfg.seed);
    cfg.ci_level = read(j, "ci_level", read(j, "ci", cfg.ci_level));
    cfg.output_path = read(j, "output", cfg.output_path);
    cfg.threads = read(j, "threads", cfg.threads);
    cfg.antithetic = read(j, "antithetic", cfg.antithetic);
    cfg.scale = read(j, "scale", cfg.scale);
    cfg.fine_n = read(j, "fine_n", cfg.fine_n);
    cfg.small_h_grid = read(j, "small_h_grid", cfg.small_h_grid);
    cfg.grid_size = read(j, "grid_size", cfg.grid_size);
    if (j.contains("spec")) cfg.spec = kernels::spec_from_json(j.at("spec"), base_dir);
    if (j.contains("constants")) {
      const auto& c = j.at("constants");
      cfg.constants = {read(c, "c1", cfg.constants.c1), read(c, "h1", cfg.constants.h1),
                       read(c, "c2", cfg.constants.c2), read(c, "h2", cfg.constants.h2)};
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  } catch (const gmax::Error& e) {
    throw ConfigError(e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  const bool monte_carlo = cfg.experiment != Experiment::BoundsTable && cfg.experiment != Experiment::Certify;
  const double h_max = cfg.experiment == Experiment::Fig1 ? 1.0 : std::nextafter(1.0, 0.0);
  auto check_h = [&](const std::vector<double>& grid, const char* name) {
    for (double h : grid) {
      require(h > 0.0 && h <= h_max, std::string(name) + " value " + format_value(h) + " outside its domain");
    }
  };
  if (cfg.experiment != Experiment::Certify) {
    require(!cfg.h_grid.empty(), "empty H grid");
    require(!cfg.n_grid.empty(), "empty n grid");
    check_h(cfg.h_grid, "H grid");
    for (std::size_t n : cfg.n_grid) require(n >= 1, "n grid values must be at least 1");
  }
  if (monte_carlo) {
    require(cfg.paths >= 2, "need at least 2 paths");
    if (cfg.antithetic) require(cfg.paths >= 4 && cfg.paths % 2 == 0, "antithetic runs need an even path count >= 4");
    require(cfg.ci_level > 0.0 && cfg.ci_level < 1.0, "confidence level must lie in (0,1)");
  }
  if (cfg.experiment == Experiment::DeltaStudy) {
    require(cfg.fine_n >= 1, "fine resolution must be at least 1");
    for (std::size_t n : cfg.n_grid) {
      require(cfg.fine_n % n == 0, "n = " + std::to_string(n) + " does not divide fine_n = " + std::to_string(cfg.fine_n));
    }
  }
  if (cfg.experiment == Experiment::Thm3Demo) {
    require(!cfg.small_h_grid.empty(), "empty small-H grid");
    check_h(cfg.small_h_grid, "small-H grid");
  }
  if (cfg.experiment == Experiment::BoundsTable) require(cfg.scale > 0.0, "scale must be positive");
  if (cfg.experiment == Experiment::Certify) {
    require(cfg.spec.has_value(), "certify needs a process spec");
    try {
      cfg.spec->validate();
    } catch (const gmax::Error& e) {
      throw ConfigError(e.what());
    }
    require(cfg.grid_size >= 2, "certification grid needs at least 2 points");
  }
}

json canonical_json(const ExperimentConfig& cfg) {
  json j = {{"experiment", std::string(to_string(cfg.experiment))},
            {"h_grid", cfg.h_grid},
            {"n_grid", cfg.n_grid},
            {"paths", cfg.paths},
            {"seed", cfg.seed},
            {"ci_level", cfg.ci_level},
            {"antithetic", cfg.antithetic},
            {"scale", cfg.scale},
            {"fine_n", cfg.fine_n},
            {"small_h_grid", cfg.small_h_grid},
            {"constants", {{"c1", cfg.constants.c1}, {"h1", cfg.constants.h1}, {"c2", cfg.constants.c2},
                           {"h2", cfg.constants.h2}}},
            {"grid_size", cfg.grid_size}};
  j["spec"] = cfg.spec ? kernels::to_json(*cfg.spec) : json();
  return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = canonical_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_value(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ExperimentResult run_fig1(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::string out = header(cfg) + "H,n,mean,stderr,half_width,seed,error\n";
  for (double h : cfg.h_grid) {
    try {
      const auto est = estimates_over_n(kernels::ProcessSpec::fbm(h), cfg.n_grid, cfg);
      for (const auto& e : est) {
        out += join_row({fmt_h(h), std::to_string(e.n), format_value(e.mean), format_value(e.std_error),
                         format_value(e.half_width), std::to_string(cfg.seed), ""});
      }
    } catch (const gmax::Error& e) {
      for (std::size_t n : cfg.n_grid) {
        out += join_row({fmt_h(h), std::to_string(n), "NA", "NA", "NA", std::to_string(cfg.seed), sanitize(e.what())});
      }
    }
  }
  res.text = std::move(out);
  return res;
}

ExperimentResult run_fig2(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const std::size_t n = cfg.n_grid.front();
  std::string out = header(cfg) + "H,lower_bound,mc_estimate_n" + std::to_string(n) + ",stderr,ok\n";
  for (double h : cfg.h_grid) {
    const double lower = 1.0 / (5.0 * std::sqrt(h));
    const auto e = estimator::estimate_expected_max(kernels::ProcessSpec::fbm(h), n, cfg.paths, cfg.seed,
                                                    cfg.ci_level, options(cfg));
    const bool ok = e.mean >= lower - 3.0 * e.std_error;
    if (!ok) res.failures.push_back("fig2: H=" + fmt_h(h) + " estimate below 1/(5 sqrt H) - 3 stderr");
    out += join_row({fmt_h(h), format_value(lower), format_value(e.mean), format_value(e.std_error), flag(ok)});
  }
  res.text = std::move(out);
  return res;
}

ExperimentResult run_bounds_table(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::string out = header(cfg) +
                    "H,n,lower_thm1,upper_thm1,upper_sf,sudakov_grid,delta_thm2,chernoff_siegmund,modulus,thm4iii,"
                    "h_zero_limit\n";
  const double c = cfg.scale;
  for (double h : cfg.h_grid) {
    for (std::size_t n : cfg.n_grid) {
      const double delta = n >= bounds::thm2_threshold(h) ? bounds::delta_upper_bound_thm2(c, h, n) : kNa;
      out += join_row({fmt_h(h), std::to_string(n), format_value(bounds::lower_bound_thm1(c, h)),
                       format_value(bounds::upper_bound_thm1(c, h)), format_value(bounds::upper_bound_sudakov_fernique(c)),
                       format_value(bounds::sudakov_grid_lower_bound(c, h, n)), format_value(delta),
                       format_value(bounds::chernoff_siegmund_delta(n)),
                       format_value(bounds::chatterjee_modulus(0.0, h, n).value),
                       format_value(bounds::thm4iii_lower_bound(h, n)), format_value(bounds::h_zero_limit(n))});
    }
  }
  res.text = std::move(out);
  return res;
}

ExperimentResult run_delta_study(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::string out = header(cfg) + "H,n,gap_estimate,gap_stderr,thm2_bound,chernoff_asymptotic,ok\n";
  for (double h : cfg.h_grid) {
    const auto gaps =
        estimator::estimate_gaps(kernels::ProcessSpec::fbm(h), cfg.n_grid, cfg.fine_n, cfg.paths, cfg.seed, options(cfg));
    for (const auto& g : gaps) {
      const bool valid = g.coarse_n >= bounds::thm2_threshold(h);
      const double bound = valid ? bounds::delta_upper_bound_thm2(1.0, h, g.coarse_n) : kNa;
      const double chernoff = h == 0.5 ? bounds::chernoff_siegmund_delta(g.coarse_n) -
                                             bounds::chernoff_siegmund_delta(g.fine_n)
                                       : kNa;
      std::string ok = "NA";
      if (valid) {
        const bool pass = g.mean_gap <= bound + 3.0 * g.std_error;
        ok = flag(pass);
        if (!pass) res.failures.push_back("delta: H=" + fmt_h(h) + " n=" + std::to_string(g.coarse_n) + " gap exceeds bound");
      }
      if (g.min_path_gap < 0.0) res.failures.push_back("delta: negative pathwise gap");
      out += join_row({fmt_h(h), std::to_string(g.coarse_n), format_value(g.mean_gap), format_value(g.std_error),
                       format_value(bound), format_value(chernoff), ok});
    }
  }
  res.text = std::move(out);
  return res;
}

ExperimentResult run_limit_h0(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::string out = header(cfg);
  std::string rows = "n,H,mc_estimate,quadrature_limit,chatterjee_modulus,stderr,white_noise_limit,ok\n";
  for (std::size_t n : cfg.n_grid) {
    const double limit = bounds::h_zero_limit(n);
    const double white = bounds::white_noise_limit(n);
    for (double h : cfg.h_grid) {
      estimator::MaxEstimate e;
      try {
        e = estimator::estimate_expected_max(kernels::ProcessSpec::fbm(h), n, cfg.paths, cfg.seed, cfg.ci_level,
                                             options(cfg));
      } catch (const EmbeddingError& err) {
        out += "# skipped n=" + std::to_string(n) + " H=" + fmt_h(h) + ": " + sanitize(err.what()) + "\n";
        continue;
      }
      const double modulus = bounds::chatterjee_modulus(0.0, h, n).value;
      const bool ok = std::abs(e.mean - limit) <= modulus + 3.0 * e.std_error;
      if (!ok) {
        res.failures.push_back("limit-h0: n=" + std::to_string(n) + " H=" + fmt_h(h) +
                               " estimate farther from the limit than the modulus allows");
      }
      rows += join_row({std::to_string(n), fmt_h(h), format_value(e.mean), format_value(limit), format_value(modulus),
                        format_value(e.std_error), format_value(white), flag(ok)});
    }
  }
  res.text = out + rows;
  return res;
}

ExperimentResult run_thm3_demo(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::string out = header(cfg);
  std::string rows =
      "sweep,H,n,n_pow_H,thm4iii,lower_thm1,upper_thm1,mc_estimate,stderr,h_zero_limit,white_noise_limit,chaining,"
      "chaining_sqrt_h,ok\n";
  const std::string na = "NA";

  // (a) n(H) = 2^{ceil(1/(2H))}
  for (double h : cfg.h_grid) {
    const double k = std::ceil(1.0 / (2.0 * h));
    if (k > 62.0) {
      out += "# sweep a: H=" + fmt_h(h) + " needs n = 2^" + format_value(k) + ", beyond 64-bit range\n";
      continue;
    }
    const std::uint64_t n = std::uint64_t{1} << static_cast<int>(k);
    rows += join_row({"a", fmt_h(h), std::to_string(n), format_value(std::pow(static_cast<double>(n), h)),
                      format_value(bounds::thm4iii_lower_bound(h, n)), format_value(bounds::lower_bound_thm1(1.0, h)),
                      format_value(bounds::upper_bound_thm1(1.0, h)), na, na, na, na, na, na, na});
  }

  // (b) fixed n, H -> 0
  for (std::size_t n : cfg.n_grid) {
    const double limit = bounds::h_zero_limit(n);
    const double white = bounds::white_noise_limit(n);
    for (double h : cfg.small_h_grid) {
      const auto e = estimator::estimate_expected_max(kernels::ProcessSpec::fbm(h), n, cfg.paths, cfg.seed,
                                                      cfg.ci_level, options(cfg));
      const bool ok = e.mean <= limit + 0.05;
      if (!ok) res.failures.push_back("thm3: n=" + std::to_string(n) + " H=" + fmt_h(h) + " estimate above limit + 0.05");
      rows += join_row({"b", fmt_h(h), std::to_string(n), na, na, na, na, format_value(e.mean),
                        format_value(e.std_error), format_value(limit), format_value(white), na, na, flag(ok)});
    }
  }

  // (c) chaining over {i/n}, n(H) = 2^{min(ceil(1/H^2), 16)}
  for (double h : cfg.h_grid) {
    const int k = static_cast<int>(std::min(std::ceil(1.0 / (h * h)), 16.0));
    const std::size_t n = std::size_t{1} << k;
    // smallest depth with 2^depth >= log2 n
    std::size_t depth = 0;
    while ((std::size_t{1} << depth) < static_cast<std::size_t>(k)) ++depth;
    std::vector<double> grid(n);
    for (std::size_t i = 1; i <= n; ++i) grid[i - 1] = static_cast<double>(i) / static_cast<double>(n);
    const auto nets = gauss::dyadic_nets(depth, grid);
    const double chain =
        gauss::chaining_upper([h](double t, double s) { return std::pow(std::abs(t - s), h); }, nets, bounds::kTalagrandL);
    rows += join_row({"c", fmt_h(h), std::to_string(n), format_value(std::pow(static_cast<double>(n), h)), na, na, na,
                      na, na, na, na, format_value(chain), format_value(chain * std::sqrt(h)), na});
  }
  res.text = out + rows;
  return res;
}

ExperimentResult run_certify(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const auto& c = cfg.constants;
  const auto cert = kernels::certify_quasihelix(*cfg.spec, c.c1, c.h1, c.c2, c.h2, cfg.grid_size);
  json j = {{"config_hash", config_hash(cfg)}, {"spec", kernels::to_json(*cfg.spec)}, {"certificate", kernels::to_json(cert)}};
  if (!cert.passed) res.failures.push_back("certify: Hoelder envelope violated");
  res.text = j.dump(2) + "\n";
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  switch (cfg.experiment) {
    case Experiment::Fig1: return run_fig1(cfg);
    case Experiment::Fig2: return run_fig2(cfg);
    case Experiment::BoundsTable: return run_bounds_table(cfg);
    case Experiment::DeltaStudy: return run_delta_study(cfg);
    case Experiment::LimitH0: return run_limit_h0(cfg);
    case Experiment::Thm3Demo: return run_thm3_demo(cfg);
    case Experiment::Certify: return run_certify(cfg);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace gmax::experiments
