#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idla/errors.hpp"
#include "idla/experiments.hpp"

namespace {

namespace cli = idla::cli;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

// every experiment subcommand shares these; unset flags leave the config
// file (or defaults) in force
struct Flags {
  std::optional<std::string> config;
  std::optional<int> dim;
  std::optional<std::int64_t> n;
  std::optional<double> alpha, beta, gamma;
  std::optional<bool> d2_variant;
  std::optional<std::int64_t> replicas;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> budget_factor;
  std::optional<std::string> out;
  std::vector<std::int64_t> gaps;
  std::vector<double> lambda_grid;
  std::optional<std::int64_t> z_distance;
  std::optional<double> cap_radius;
  std::optional<double> escape_factor;
};

void add_common_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config (or manifest) file; flags override fields");
  sub->add_option("--dim", f.dim, "lattice dimension (>= 2)");
  sub->add_option("--n", f.n, "nominal radius / particle count / oracle cluster size");
  sub->add_option("--alpha", f.alpha, "hole-depth scale alpha");
  sub->add_option("--beta", f.beta, "outer scale beta");
  sub->add_option("--gamma", f.gamma, "pause-sphere scale gamma");
  sub->add_flag("--d2-variant", f.d2_variant, "use the sqrt(log n loglog n) depth scale");
  sub->add_option("--replicas", f.replicas, "replica count");
  sub->add_option("--seed", f.seed, "master seed (all randomness derives from it)");
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  sub->add_option("--budget-factor", f.budget_factor, "walk step budget multiplier");
  sub->add_option("--out", f.out, "output directory");
}

cli::ExperimentConfig build_config(const Flags& f, const std::string& experiment) {
  cli::ExperimentConfig cfg;
  if (f.config) cfg = cli::load_config_file(*f.config);
  cfg.experiment = experiment;
  if (f.dim) cfg.dim = *f.dim;
  if (f.n) cfg.n = *f.n;
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.beta) cfg.beta = *f.beta;
  if (f.gamma) cfg.gamma = *f.gamma;
  if (f.d2_variant) cfg.d2_variant = *f.d2_variant;
  if (f.replicas) cfg.replicas = *f.replicas;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.budget_factor) cfg.budget_factor = *f.budget_factor;
  if (f.out) cfg.out = *f.out;
  if (!f.gaps.empty()) cfg.gaps = f.gaps;
  if (!f.lambda_grid.empty()) cfg.lambda_grid = f.lambda_grid;
  if (f.z_distance) cfg.z_distance = *f.z_distance;
  if (f.cap_radius) cfg.cap_radius = *f.cap_radius;
  if (f.escape_factor) cfg.escape_factor = *f.escape_factor;
  return cfg;
}

int run_experiment(const Flags& f, const std::string& experiment) {
  auto man = cli::run(build_config(f, experiment));
  for (const auto& [file, digest] : man.digests)
    std::cout << "wrote " << man.config.out << "/" << file << "  fnv1a64:" << digest << "\n";
  std::cout << "manifest: " << man.manifest_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"internal DLA growth experiments"};
  app.require_subcommand(1);

  Flags flags;
  std::string plot_kind, plot_input, plot_out = "plot.csv";

  const std::vector<std::string> experiments{"grow",     "abelian-check", "shape",
                                             "directional", "tentacle",  "deep-hole",
                                             "harmonic", "oracle-check"};
  const std::vector<std::string> blurbs{
      "grow one cluster and write its snapshot",
      "verify schedule invariance of the final set",
      "inner/outer radius errors over replicas",
      "per-direction coverage misses over replicas",
      "overshoot protocol: pause below the rim, release, watch for protrusions",
      "iterated deep-hole waves with event bookkeeping",
      "joint-zero probability over a lambda grid",
      "Monte Carlo cluster law vs the exact distribution",
  };
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    auto* sub = app.add_subcommand(experiments[i], blurbs[i]);
    add_common_flags(sub, flags);
    if (experiments[i] == "directional")
      sub->add_option("--gaps", flags.gaps, "gaps n - |z| to test");
    if (experiments[i] == "harmonic") {
      sub->add_option("--lambda-grid", flags.lambda_grid, "Poisson intensities");
      sub->add_option("--z-distance", flags.z_distance, "target site distance on the first axis");
      sub->add_option("--cap-radius", flags.cap_radius, "cap radius around the target");
      sub->add_option("--escape-factor", flags.escape_factor, "escape ball radius multiplier");
    }
  }

  auto* plot = app.add_subcommand("plot-data", "aggregate a results CSV into plot columns");
  plot->add_option("kind", plot_kind, "delta-vs-sqrtlog | missprob-vs-gap2 | zeroprob-vs-lambda")
      ->required();
  plot->add_option("input", plot_input, "results CSV written by an experiment run")->required();
  plot->add_option("--out", plot_out, "output CSV path");
  plot->add_option("--config", flags.config, "config supplying the zero-probability geometry");
  plot->add_option("--dim", flags.dim, "dimension for the zero-probability abscissa");
  plot->add_option("--z-distance", flags.z_distance, "target distance for the abscissa");
  plot->add_option("--cap-radius", flags.cap_radius, "cap radius for the abscissa");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    for (const auto& name : experiments)
      if (app.got_subcommand(name)) return run_experiment(flags, name);
    // plot-data: config is optional; the defaults carry the usual geometry
    cli::ExperimentConfig cfg;
    if (flags.config) cfg = cli::load_config_file(*flags.config);
    if (flags.dim) cfg.dim = *flags.dim;
    if (flags.z_distance) cfg.z_distance = *flags.z_distance;
    if (flags.cap_radius) cfg.cap_radius = *flags.cap_radius;
    cli::emit_plot_data(plot_input, cli::plot_kind_from(plot_kind), cfg, plot_out);
    std::cout << "wrote " << plot_out << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const idla::BudgetExceeded& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
