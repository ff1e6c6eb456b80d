#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "idla/stats.hpp"

// Batch front door: config merging, experiment orchestration, CSV/manifest
// persistence, and plot-ready aggregation. Everything here is deterministic
// in (config, seed); thread count never changes an output byte.
namespace idla::cli {

struct ExperimentConfig {
  std::string experiment;  // grow | abelian-check | shape | directional |
                           // tentacle | deep-hole | harmonic | oracle-check
  int dim = 2;
  // nominal radius for most experiments; particle count for abelian-check;
  // cluster size k for oracle-check
  std::int64_t n = 10;
  double alpha = 0.5;
  double beta = 0.5;
  double gamma = 0.5;
  bool d2_variant = false;
  std::int64_t replicas = 1;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all available cores
  double budget_factor = 1e4;
  std::string out = ".";
  std::vector<std::int64_t> gaps{1, 2, 3, 4};        // directional
  std::vector<double> lambda_grid{10, 20, 40, 80};   // harmonic
  std::int64_t z_distance = 6;                       // harmonic: z = z_distance * e_1
  double cap_radius = 3.0;                           // harmonic: cap R around z
  double escape_factor = 25.0;                       // harmonic truncation

  void validate() const;  // invalid_argument with the offending field
  stats::ScalingProfile profile() const;
  int effective_threads() const;
};

// JSON round trip. The loader also accepts a manifest document (it unwraps
// the "config" object), so a manifest can be re-run directly.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config_file(const std::string& path);

struct RunManifest {
  std::string version;
  ExperimentConfig config;
  // per-replica stream ids handed to the orchestrated replicas; empty when
  // the library call manages its own substreams internally
  std::vector<std::uint64_t> replica_streams;
  std::map<std::string, std::string> digests;  // file name -> fnv1a64 hex
  std::string manifest_path;

  nlohmann::json to_json() const;
};

// Executes the named experiment, writes the results file(s) plus
// manifest.json under config.out, and returns the manifest.
RunManifest run(const ExperimentConfig& cfg);

enum class PlotKind { DeltaVsSqrtLog, MissprobVsGap2, ZeroprobVsLambda };

PlotKind plot_kind_from(const std::string& name);

// Aggregates a results CSV into plot-ready columns (means, stderr, and the
// transformed regressor). The config supplies the harmonic geometry for the
// zero-probability abscissa. Schema mismatches name the offending columns.
void emit_plot_data(const std::string& results_csv, PlotKind kind, const ExperimentConfig& cfg,
                    const std::string& out_path);

// formatting and hashing used for all persisted output
std::string fmt_double(double v);  // %.17g
std::uint64_t fnv1a64_file(const std::string& path);
std::string hex64(std::uint64_t v);

}  // namespace idla::cli
