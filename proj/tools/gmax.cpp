// gmax: experiment runner and sampling front end.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmax/error.hpp"
#include "gmax/estimator.hpp"
#include "gmax/experiments.hpp"
#include "gmax/kernels.hpp"
#include "gmax/parallel.hpp"
#include "gmax/sampling.hpp"

namespace {

namespace ex = gmax::experiments;
using nlohmann::json;

constexpr int kExitAssertion = 2;
constexpr int kExitConfig = 3;

struct CommonFlags {
  std::string config;
  std::vector<double> h_grid;
  std::vector<std::size_t> n_grid;
  std::size_t paths = 0;
  std::uint64_t seed = 0;
  double ci = 0.0;
  std::string out;
  unsigned threads = 0;
  bool no_antithetic = false;
  CLI::Option* h_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* paths_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* ci_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
};

struct SpecFlags {
  std::string file;
  std::string family = "fbm";
  double hurst = 0.5;
  double k = 1.0;
  double scale = 1.0;
  CLI::Option* file_opt = nullptr;
};

void add_common(CLI::App* app, CommonFlags& f, bool monte_carlo) {
  app->add_option("--config", f.config, "JSON configuration file")->check(CLI::ExistingFile);
  f.h_opt = app->add_option("--h-grid", f.h_grid, "Hurst values, comma separated")->delimiter(',');
  f.n_opt = app->add_option("--n-grid", f.n_grid, "grid resolutions, comma separated")->delimiter(',');
  if (monte_carlo) {
    f.paths_opt = app->add_option("--paths", f.paths, "paths per cell");
    f.seed_opt = app->add_option("--seed", f.seed, "64-bit seed");
    f.ci_opt = app->add_option("--ci", f.ci, "confidence level");
    app->add_flag("--no-antithetic", f.no_antithetic, "disable antithetic pairing");
  }
  f.out_opt = app->add_option("--out", f.out, "output file (default stdout)");
  f.threads_opt = app->add_option("--threads", f.threads, "worker threads (default GMAX_THREADS)");
}

void add_spec(CLI::App* app, SpecFlags& s) {
  s.file_opt = app->add_option("--spec", s.file, "process spec JSON file")->check(CLI::ExistingFile);
  app->add_option("--family", s.family, "FBM, SUBFBM or BIFBM");
  app->add_option("--hurst", s.hurst, "Hurst index H");
  app->add_option("--k", s.k, "bifractional index K");
  app->add_option("--scale", s.scale, "scale C");
}

gmax::kernels::ProcessSpec build_spec(const SpecFlags& s) {
  using gmax::kernels::Family;
  using gmax::kernels::ProcessSpec;
  if (s.file_opt->count() > 0) {
    std::ifstream in(s.file);
    const json j = json::parse(in);
    return gmax::kernels::spec_from_json(j, std::filesystem::path(s.file).parent_path().string());
  }
  ProcessSpec spec;
  switch (gmax::kernels::family_from_string(s.family)) {
    case Family::Fbm: spec = ProcessSpec::fbm(s.hurst, s.scale); break;
    case Family::SubFbm: spec = ProcessSpec::sub_fbm(s.hurst, s.scale); break;
    case Family::BiFbm: spec = ProcessSpec::bi_fbm(s.hurst, s.k, s.scale); break;
    default: throw ex::ConfigError("family " + s.family + " needs a --spec file");
  }
  spec.validate();
  return spec;
}

ex::ExperimentConfig build_config(ex::Experiment which, const CommonFlags& f) {
  ex::ExperimentConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw ex::ConfigError(std::string("cannot parse ") + f.config + ": " + e.what());
    }
    if (!j.contains("experiment")) j["experiment"] = std::string(ex::to_string(which));
    cfg = ex::config_from_json(j, std::filesystem::path(f.config).parent_path().string());
    if (cfg.experiment != which) throw ex::ConfigError("configuration is for a different experiment");
  } else {
    cfg = ex::default_config(which);
  }
  if (f.h_opt->count()) cfg.h_grid = f.h_grid;
  if (f.n_opt->count()) cfg.n_grid = f.n_grid;
  if (f.paths_opt && f.paths_opt->count()) cfg.paths = f.paths;
  if (f.seed_opt && f.seed_opt->count()) cfg.seed = f.seed;
  if (f.ci_opt && f.ci_opt->count()) cfg.ci_level = f.ci;
  if (f.no_antithetic) cfg.antithetic = false;
  if (f.out_opt->count()) cfg.output_path = f.out;
  if (f.threads_opt->count()) cfg.threads = f.threads;
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ex::ConfigError("cannot open " + path + " for writing");
  out << text;
}

int run(ex::Experiment which, const CommonFlags& flags, const std::function<void(ex::ExperimentConfig&)>& extra) {
  auto cfg = build_config(which, flags);
  if (extra) extra(cfg);
  const auto result = ex::run_experiment(cfg);
  emit(result.text, cfg.output_path);
  for (const auto& failure : result.failures) std::cerr << "assertion failed: " << failure << '\n';
  return result.passed() ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gmax: expected maxima of Hoelder-type Gaussian processes"};
  app.require_subcommand(1);

  struct Entry {
    ex::Experiment which;
    CLI::App* cmd;
    CommonFlags flags;
  };
  std::vector<std::unique_ptr<Entry>> entries;
  auto add_experiment = [&](const char* name, ex::Experiment which, const char* help, bool monte_carlo) {
    auto e = std::make_unique<Entry>();
    e->which = which;
    e->cmd = app.add_subcommand(name, help);
    add_common(e->cmd, e->flags, monte_carlo);
    entries.push_back(std::move(e));
    return entries.back().get();
  };
  add_experiment("fig1", ex::Experiment::Fig1, "Monte Carlo E max over grids i/n, per (H,n)", true);
  add_experiment("fig2", ex::Experiment::Fig2, "estimates at the finest grid against 1/(5 sqrt H)", true);
  add_experiment("bounds", ex::Experiment::BoundsTable, "closed-form bounds over an (H,n) grid", false);
  auto* delta = add_experiment("delta", ex::Experiment::DeltaStudy, "coupled nested-grid gaps vs the delta bound", true);
  std::size_t fine_n = 0;
  auto* fine_opt = delta->cmd->add_option("--fine", fine_n, "fine grid resolution");
  add_experiment("limit-h0", ex::Experiment::LimitH0, "small-H estimates vs the H -> 0 limit", true);
  auto* thm3 = add_experiment("thm3", ex::Experiment::Thm3Demo, "growth sweeps and chaining estimates as H -> 0", true);
  std::vector<double> small_h;
  auto* small_h_opt = thm3->cmd->add_option("--small-h-grid", small_h, "H values for the fixed-n sweep")->delimiter(',');
  auto* certify = add_experiment("certify", ex::Experiment::Certify, "check a two-sided Hoelder envelope", false);
  SpecFlags cert_spec;
  add_spec(certify->cmd, cert_spec);
  ex::HolderConstants constants;
  std::size_t grid_size = 257;
  auto* c1 = certify->cmd->add_option("--c1", constants.c1, "lower envelope constant");
  auto* h1 = certify->cmd->add_option("--h1", constants.h1, "lower envelope exponent");
  auto* c2 = certify->cmd->add_option("--c2", constants.c2, "upper envelope constant");
  auto* h2 = certify->cmd->add_option("--h2", constants.h2, "upper envelope exponent");
  auto* grid_opt = certify->cmd->add_option("--grid-size", grid_size, "number of grid points");

  auto* sample = app.add_subcommand("sample", "write exact sample paths on {i/n}");
  SpecFlags sample_spec;
  add_spec(sample, sample_spec);
  std::size_t sample_n = 1024, sample_m = 4;
  std::uint64_t sample_seed = 1;
  bool sample_antithetic = false;
  std::string sample_format = "csv", sample_out;
  unsigned sample_threads = gmax::default_thread_count();
  sample->add_option("--n", sample_n, "grid resolution");
  sample->add_option("--paths", sample_m, "number of paths");
  sample->add_option("--seed", sample_seed, "64-bit seed");
  sample->add_flag("--antithetic", sample_antithetic, "emit antithetic pairs");
  sample->add_option("--format", sample_format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  sample->add_option("--out", sample_out, "output file (default stdout)");
  sample->add_option("--threads", sample_threads, "worker threads");

  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of E max on {i/n} as JSON");
  SpecFlags est_spec;
  add_spec(estimate, est_spec);
  std::size_t est_n = 1024, est_m = 20000;
  std::uint64_t est_seed = 1;
  double est_ci = gmax::estimator::kDefaultCiLevel;
  bool est_plain = false;
  std::string est_out;
  unsigned est_threads = gmax::default_thread_count();
  estimate->add_option("--n", est_n, "grid resolution");
  estimate->add_option("--paths", est_m, "number of paths");
  estimate->add_option("--seed", est_seed, "64-bit seed");
  estimate->add_option("--ci", est_ci, "confidence level");
  estimate->add_flag("--no-antithetic", est_plain, "disable antithetic pairing");
  estimate->add_option("--out", est_out, "output file (default stdout)");
  estimate->add_option("--threads", est_threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (const auto& e : entries) {
      if (!e->cmd->parsed()) continue;
      std::function<void(ex::ExperimentConfig&)> extra;
      if (e.get() == delta) {
        extra = [&](ex::ExperimentConfig& cfg) {
          if (fine_opt->count()) cfg.fine_n = fine_n;
        };
      } else if (e.get() == thm3) {
        extra = [&](ex::ExperimentConfig& cfg) {
          if (small_h_opt->count()) cfg.small_h_grid = small_h;
        };
      } else if (e.get() == certify) {
        extra = [&](ex::ExperimentConfig& cfg) {
          if (cert_spec.file_opt->count() || !cfg.spec || e->flags.config.empty()) cfg.spec = build_spec(cert_spec);
          if (c1->count()) cfg.constants.c1 = constants.c1;
          if (h1->count()) cfg.constants.h1 = constants.h1;
          if (c2->count()) cfg.constants.c2 = constants.c2;
          if (h2->count()) cfg.constants.h2 = constants.h2;
          if (grid_opt->count()) cfg.grid_size = grid_size;
        };
      }
      return run(e->which, e->flags, extra);
    }

    if (sample->parsed()) {
      const auto spec = build_spec(sample_spec);
      const auto batch = gmax::sampling::sample_paths(spec, sample_n, sample_m, sample_seed, sample_antithetic,
                                                      std::max(1u, sample_threads));
      const bool binary = sample_format == "bin";
      if (sample_out.empty()) {
        binary ? gmax::sampling::write_binary(batch, std::cout) : gmax::sampling::write_csv(batch, std::cout);
      } else {
        std::ofstream out(sample_out, binary ? std::ios::binary : std::ios::out);
        if (!out) throw ex::ConfigError("cannot open " + sample_out);
        binary ? gmax::sampling::write_binary(batch, out) : gmax::sampling::write_csv(batch, out);
      }
      return 0;
    }

    if (estimate->parsed()) {
      const auto spec = build_spec(est_spec);
      const auto est = gmax::estimator::estimate_expected_max(spec, est_n, est_m, est_seed, est_ci,
                                                              {!est_plain, std::max(1u, est_threads)});
      emit(gmax::estimator::to_json(est, spec).dump(2) + "\n", est_out);
      return 0;
    }
  } catch (const ex::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gmax::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gmax::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const gmax::FormatError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
