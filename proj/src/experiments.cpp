#include "idla/experiments.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "idla/core.hpp"
#include "idla/errors.hpp"
#include "idla/geometry.hpp"
#include "idla/harmonic.hpp"
#include "idla/oracle.hpp"
#include "idla/parallel.hpp"
#include "idla/version.hpp"

namespace idla::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[65536];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    for (std::streamsize i = 0; i < is.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (is.eof()) break;
  }
  return h;
}

// --- config ------------------------------------------------------------

void ExperimentConfig::validate() const {
  static const std::set<std::string> kKnown{"grow",      "abelian-check", "shape",
                                            "directional", "tentacle",    "deep-hole",
                                            "harmonic",  "oracle-check"};
  if (!kKnown.count(experiment))
    throw std::invalid_argument("config: unknown experiment '" + experiment + "'");
  if (dim < 2 || dim > Site::kMaxDim)
    throw std::invalid_argument("config: dim must be in [2, 8]");
  if (n < 0) throw std::invalid_argument("config: n must be >= 0");
  if (replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (!(budget_factor > 0) || !std::isfinite(budget_factor))
    throw std::invalid_argument("config: budget_factor must be positive");
  profile().validate();  // alpha/beta/gamma
  if (out.empty()) throw std::invalid_argument("config: out must not be empty");
  for (std::int64_t g : gaps)
    if (g < 1) throw std::invalid_argument("config: gaps must be >= 1");
  if (z_distance < 1) throw std::invalid_argument("config: z_distance must be >= 1");
  if (!(cap_radius > 0)) throw std::invalid_argument("config: cap_radius must be positive");
  if (!(escape_factor > 0)) throw std::invalid_argument("config: escape_factor must be positive");
  for (double l : lambda_grid)
    if (!(l >= 0) || !std::isfinite(l))
      throw std::invalid_argument("config: lambda_grid entries must be finite and >= 0");
}

stats::ScalingProfile ExperimentConfig::profile() const {
  return stats::ScalingProfile{alpha, beta, gamma, d2_variant};
}

int ExperimentConfig::effective_threads() const {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

template <class T>
void read_field(const json& j, const char* name, T& into) {
  auto it = j.find(name);
  if (it == j.end()) return;
  try {
    into = it->get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: field '") + name + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: document must be a JSON object");
  static const std::set<std::string> kFields{
      "experiment", "dim",     "n",           "alpha",      "beta",          "gamma",
      "d2_variant", "replicas", "seed",       "threads",    "budget_factor", "out",
      "gaps",       "lambda_grid", "z_distance", "cap_radius", "escape_factor"};
  for (const auto& item : j.items())
    if (!kFields.count(item.key()))
      throw std::invalid_argument("config: unknown field '" + item.key() + "'");
  ExperimentConfig cfg;
  read_field(j, "experiment", cfg.experiment);
  read_field(j, "dim", cfg.dim);
  read_field(j, "n", cfg.n);
  read_field(j, "alpha", cfg.alpha);
  read_field(j, "beta", cfg.beta);
  read_field(j, "gamma", cfg.gamma);
  read_field(j, "d2_variant", cfg.d2_variant);
  read_field(j, "replicas", cfg.replicas);
  read_field(j, "seed", cfg.seed);
  read_field(j, "threads", cfg.threads);
  read_field(j, "budget_factor", cfg.budget_factor);
  read_field(j, "out", cfg.out);
  read_field(j, "gaps", cfg.gaps);
  read_field(j, "lambda_grid", cfg.lambda_grid);
  read_field(j, "z_distance", cfg.z_distance);
  read_field(j, "cap_radius", cfg.cap_radius);
  read_field(j, "escape_factor", cfg.escape_factor);
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["dim"] = cfg.dim;
  j["n"] = cfg.n;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["gamma"] = cfg.gamma;
  j["d2_variant"] = cfg.d2_variant;
  j["replicas"] = cfg.replicas;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["budget_factor"] = cfg.budget_factor;
  j["out"] = cfg.out;
  j["gaps"] = cfg.gaps;
  j["lambda_grid"] = cfg.lambda_grid;
  j["z_distance"] = cfg.z_distance;
  j["cap_radius"] = cfg.cap_radius;
  j["escape_factor"] = cfg.escape_factor;
  return j;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
  }
  // a manifest wraps the config it ran with; accept it directly
  if (j.is_object() && j.contains("config") && j.contains("version"))
    return config_from_json(j.at("config"));
  return config_from_json(j);
}

json RunManifest::to_json() const {
  json j;
  j["version"] = version;
  j["config"] = config_to_json(config);
  j["replica_streams"] = replica_streams;
  j["digests"] = digests;
  return j;
}

// --- persistence helpers -------------------------------------------------

namespace {

class CsvFile {
 public:
  CsvFile(const std::string& path, const std::string& header) : os_(path, std::ios::binary) {
    if (!os_) throw std::runtime_error("cannot open for writing: " + path);
    os_ << header << '\n';
  }
  std::ostream& os() { return os_; }
  void finish(const std::string& path) {
    os_.flush();
    if (!os_) throw std::runtime_error("write failed: " + path);
  }

 private:
  std::ofstream os_;
};

std::vector<std::uint64_t> replica_streams_of(std::uint64_t seed, std::int64_t replicas) {
  std::vector<std::uint64_t> v;
  v.reserve(static_cast<std::size_t>(replicas));
  for (std::int64_t r = 0; r < replicas; ++r)
    v.push_back(walk::substream({seed, static_cast<std::uint64_t>(r)}));
  return v;
}

// --- experiment drivers ----------------------------------------------------

void run_grow(const ExperimentConfig& cfg, const std::string& path) {
  std::int64_t particles = geom::ball_count(cfg.dim, static_cast<double>(cfg.n));
  walk::RngStream rng(walk::substream({cfg.seed, 0}), 0);
  core::Cluster cl(cfg.dim, core::radius_hint(cfg.dim, particles));
  auto src = core::source_of(rng, cfg.dim);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(cfg.dim, particles), src,
                        cfg.budget_factor);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  cl.write_snapshot(os, cfg.seed);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}

void run_abelian(const ExperimentConfig& cfg, const std::string& path) {
  const std::int64_t particles = cfg.n;  // n is the particle count here
  walk::InstructionStacks ref_stacks(cfg.seed, cfg.dim);
  core::Cluster ref(cfg.dim, core::radius_hint(cfg.dim, particles));
  {
    auto src = core::source_of(ref_stacks);
    core::grow_sequential(ref, core::ParticleConfig::at_origin(cfg.dim, particles), src,
                          cfg.budget_factor);
  }
  const auto ref_sites = ref.sites();
  const double rho_n = static_cast<double>(
      geom::rho(cfg.dim, static_cast<double>(std::max<std::int64_t>(particles, 1))));

  CsvFile csv(path, "replica,matches,seed");
  for (std::int64_t r = 0; r < cfg.replicas; ++r) {
    // a random schedule: explorers leave in batches, pause on a random
    // sphere, and resume in shuffled order; the stacks force set equality
    walk::RngStream mix(walk::substream({cfg.seed, static_cast<std::uint64_t>(r)}), 1);
    walk::InstructionStacks stacks(cfg.seed, cfg.dim);
    core::Cluster cl(cfg.dim, core::radius_hint(cfg.dim, particles));
    auto src = core::source_of(stacks);
    std::int64_t remaining = particles;
    const std::uint32_t stages = 1 + mix.next_below(3);
    for (std::uint32_t s = 0; s < stages && remaining > 0; ++s) {
      std::int64_t batch =
          1 + static_cast<std::int64_t>(mix.next() % static_cast<std::uint64_t>(remaining));
      double stop_r = 1.0 + mix.next_unit() * (rho_n + 1.0);
      core::WaveOptions opt;
      opt.budget_factor = cfg.budget_factor;
      auto wave =
          core::wave_run(cl, core::ParticleConfig::at_origin(cfg.dim, batch), stop_r, src, opt);
      std::vector<Site> paused;
      for (const auto& [site, count] : wave.stopped)
        for (std::int64_t i = 0; i < count; ++i) paused.push_back(site);
      std::shuffle(paused.begin(), paused.end(), mix);
      core::grow_in_order(cl, paused, src, cfg.budget_factor);
      remaining -= batch;
    }
    core::grow_sequential(cl, core::ParticleConfig::at_origin(cfg.dim, remaining), src,
                          cfg.budget_factor);
    bool matches = cl.sites() == ref_sites;
    csv.os() << r << ',' << (matches ? 1 : 0) << ',' << cfg.seed << '\n';
  }
  csv.finish(path);
}

void run_shape(const ExperimentConfig& cfg, const std::string& path) {
  auto records = stats::shape_errors(cfg.dim, cfg.n, cfg.replicas, cfg.seed,
                                     cfg.effective_threads(), cfg.budget_factor);
  CsvFile csv(path, "replica,n,delta_inner,delta_outer,seed");
  for (const auto& rec : records)
    csv.os() << rec.replica << ',' << rec.n << ',' << fmt_double(rec.delta_inner) << ','
             << fmt_double(rec.delta_outer) << ',' << rec.seed << '\n';
  csv.finish(path);
}

void run_directional(const ExperimentConfig& cfg, const std::string& path) {
  auto records = stats::directional_experiment(cfg.dim, cfg.n, cfg.gaps, cfg.replicas, cfg.seed,
                                               cfg.effective_threads(), cfg.budget_factor);
  CsvFile csv(path, "replica,n,gap,miss,seed");
  for (const auto& rec : records)
    csv.os() << rec.replica << ',' << rec.n << ',' << rec.gap << ',' << (rec.miss ? 1 : 0) << ','
             << rec.seed << '\n';
  csv.finish(path);
}

void run_tentacle(const ExperimentConfig& cfg, const std::string& path) {
  std::vector<stats::TentacleReport> reports(static_cast<std::size_t>(cfg.replicas));
  parallel_for(cfg.replicas, cfg.effective_threads(), [&](std::int64_t r) {
    reports[static_cast<std::size_t>(r)] =
        stats::tentacle_experiment(cfg.dim, cfg.n, cfg.profile(),
                                   walk::substream({cfg.seed, static_cast<std::uint64_t>(r)}),
                                   cfg.budget_factor);
  });
  CsvFile csv(path,
              "replica,n,lambda_n,x_n,poisson_ok,delta_inner_wave1,paused_sites,paused_total,"
              "protrusion,r_n,delta_outer_final,final_size,seed");
  for (std::size_t r = 0; r < reports.size(); ++r) {
    const auto& t = reports[r];
    csv.os() << r << ',' << t.n << ',' << fmt_double(t.lambda_n) << ',' << t.x_n << ','
             << (t.poisson_ok ? 1 : 0) << ',' << fmt_double(t.delta_inner_wave1) << ','
             << t.paused_sites << ',' << t.paused_total << ',' << (t.protrusion ? 1 : 0) << ','
             << t.r_n << ',' << fmt_double(t.delta_outer_final) << ',' << t.final_size << ','
             << cfg.seed << '\n';
  }
  csv.finish(path);
}

void run_deep_hole(const ExperimentConfig& cfg, const std::string& path) {
  std::vector<stats::DeepHoleRun> runs(static_cast<std::size_t>(cfg.replicas));
  parallel_for(cfg.replicas, cfg.effective_threads(), [&](std::int64_t r) {
    runs[static_cast<std::size_t>(r)] =
        stats::deep_hole_experiment(cfg.dim, cfg.n, cfg.profile(),
                                    walk::substream({cfg.seed, static_cast<std::uint64_t>(r)}),
                                    cfg.budget_factor);
  });
  CsvFile csv(path, "replica,k,R_k,X_k,lambda_k,zk_norm,event_A,event_C,event_I,event_outer,seed");
  for (std::size_t r = 0; r < runs.size(); ++r)
    for (const auto& rec : runs[r].waves)
      csv.os() << r << ',' << rec.k << ',' << rec.r_k << ',' << rec.x_k << ','
               << fmt_double(rec.lambda_k) << ',' << fmt_double(rec.zk_norm) << ','
               << (rec.event_a ? 1 : 0) << ',' << (rec.event_c ? 1 : 0) << ','
               << (rec.event_i ? 1 : 0) << ',' << (rec.event_outer ? 1 : 0) << ',' << cfg.seed
               << '\n';
  csv.finish(path);
}

void run_harmonic(const ExperimentConfig& cfg, const std::string& path) {
  Site z = Site::axis(cfg.dim, 0, static_cast<std::int32_t>(cfg.z_distance));
  std::vector<double> grid = cfg.lambda_grid;
  std::sort(grid.begin(), grid.end());
  auto fit = harmonic::joint_zero_probe(grid, z, cfg.cap_radius, cfg.replicas, cfg.seed,
                                        cfg.escape_factor);
  CsvFile csv(path, "grid_value,estimate,stderr,replicas,seed");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // recover the exact zero count behind -log p; the log/exp round trip is
    // within an ulp, so the rounding is exact
    double p = std::exp(-fit.points[i].second);
    double zeros = std::round(p * static_cast<double>(cfg.replicas));
    p = zeros / static_cast<double>(cfg.replicas);
    double se = std::sqrt(p * (1 - p) / static_cast<double>(cfg.replicas));
    csv.os() << fmt_double(grid[i]) << ',' << fmt_double(p) << ',' << fmt_double(se) << ','
             << cfg.replicas << ',' << cfg.seed << '\n';
  }
  csv.finish(path);
}

void run_oracle_check(const ExperimentConfig& cfg, const std::string& path) {
  const int k = static_cast<int>(cfg.n);
  auto exact = oracle::cluster_distribution_exact(k, cfg.dim);
  auto mc = oracle::cluster_distribution_mc(k, cfg.dim, cfg.replicas, cfg.seed);
  double tv = oracle::tv_distance(exact, mc);
  CsvFile csv(path, "k,dim,tv,samples,seed");
  csv.os() << k << ',' << cfg.dim << ',' << fmt_double(tv) << ',' << cfg.replicas << ','
           << cfg.seed << '\n';
  csv.finish(path);
}

}  // namespace

RunManifest run(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.out);
  RunManifest man;
  man.version = kVersion;
  man.config = cfg;

  std::vector<std::string> files;
  auto path_of = [&](const std::string& name) { return (fs::path(cfg.out) / name).string(); };

  if (cfg.experiment == "grow") {
    files.push_back("snapshot.txt");
    run_grow(cfg, path_of(files.back()));
    man.replica_streams = {walk::substream({cfg.seed, 0})};
  } else if (cfg.experiment == "abelian-check") {
    files.push_back("abelian_check.csv");
    run_abelian(cfg, path_of(files.back()));
    man.replica_streams = replica_streams_of(cfg.seed, cfg.replicas);
  } else if (cfg.experiment == "shape") {
    files.push_back("shape.csv");
    run_shape(cfg, path_of(files.back()));
    man.replica_streams = replica_streams_of(cfg.seed, cfg.replicas);
  } else if (cfg.experiment == "directional") {
    files.push_back("directional.csv");
    run_directional(cfg, path_of(files.back()));
    man.replica_streams = replica_streams_of(cfg.seed, cfg.replicas);
  } else if (cfg.experiment == "tentacle") {
    files.push_back("tentacle.csv");
    run_tentacle(cfg, path_of(files.back()));
    man.replica_streams = replica_streams_of(cfg.seed, cfg.replicas);
  } else if (cfg.experiment == "deep-hole") {
    files.push_back("deep_hole.csv");
    run_deep_hole(cfg, path_of(files.back()));
    man.replica_streams = replica_streams_of(cfg.seed, cfg.replicas);
  } else if (cfg.experiment == "harmonic") {
    files.push_back("harmonic.csv");
    run_harmonic(cfg, path_of(files.back()));
    // walker substreams are derived inside the estimator
  } else {  // oracle-check (validate() already rejected anything else)
    files.push_back("oracle_check.csv");
    run_oracle_check(cfg, path_of(files.back()));
  }

  for (const auto& f : files) man.digests[f] = hex64(fnv1a64_file(path_of(f)));
  man.manifest_path = path_of("manifest.json");
  {
    std::ofstream os(man.manifest_path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + man.manifest_path);
    os << man.to_json().dump(2) << '\n';
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + man.manifest_path);
  }
  return man;
}

// --- plot aggregation --------------------------------------------------

PlotKind plot_kind_from(const std::string& name) {
  if (name == "delta-vs-sqrtlog") return PlotKind::DeltaVsSqrtLog;
  if (name == "missprob-vs-gap2") return PlotKind::MissprobVsGap2;
  if (name == "zeroprob-vs-lambda") return PlotKind::ZeroprobVsLambda;
  throw std::invalid_argument("plot-data: unknown kind '" + name + "'");
}

namespace {

struct CsvTable {
  std::vector<std::vector<std::string>> rows;  // header excluded
};

CsvTable read_csv(const std::string& path, const std::string& expected_header) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::invalid_argument("plot-data: cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("plot-data: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected_header)
    throw std::invalid_argument("plot-data: header mismatch in " + path + ": expected `" +
                                expected_header + "`, found `" + line + "`");
  CsvTable t;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

double num(const std::vector<std::string>& row, std::size_t i) {
  return std::stod(row.at(i));
}

struct Accum {
  double sum = 0, sumsq = 0;
  std::int64_t count = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double se() const {
    if (count < 2) return 0;
    double m = mean();
    double var = (sumsq - static_cast<double>(count) * m * m) / static_cast<double>(count - 1);
    return std::sqrt(std::max(var, 0.0) / static_cast<double>(count));
  }
};

void plot_delta(const CsvTable& t, const std::string& out_path) {
  std::map<std::int64_t, std::pair<Accum, Accum>> groups;  // n -> (inner, outer)
  std::vector<stats::ErrorRecord> records;
  for (const auto& row : t.rows) {
    auto n = static_cast<std::int64_t>(num(row, 1));
    groups[n].first.add(num(row, 2));
    groups[n].second.add(num(row, 3));
    records.push_back(stats::ErrorRecord{n, num(row, 2), num(row, 3), 0, 0});
  }
  double slope_inner = std::nan(""), slope_outer = std::nan("");
  if (groups.size() >= 3) {
    slope_inner = stats::scaling_fit(records, stats::FitModel::SqrtLog,
                                     stats::ErrorSide::Inner).slope;
    slope_outer = stats::scaling_fit(records, stats::FitModel::SqrtLog,
                                     stats::ErrorSide::Outer).slope;
  }
  CsvFile csv(out_path,
              "n,sqrt_log_n,mean_delta_inner,se_delta_inner,mean_delta_outer,se_delta_outer,"
              "replicas,slope_inner,slope_outer");
  for (const auto& [n, acc] : groups) {
    double x = n > 1 ? std::sqrt(std::log(static_cast<double>(n))) : 0.0;
    csv.os() << n << ',' << fmt_double(x) << ',' << fmt_double(acc.first.mean()) << ','
             << fmt_double(acc.first.se()) << ',' << fmt_double(acc.second.mean()) << ','
             << fmt_double(acc.second.se()) << ',' << acc.first.count << ','
             << fmt_double(slope_inner) << ',' << fmt_double(slope_outer) << '\n';
  }
  csv.finish(out_path);
}

void plot_missprob(const CsvTable& t, const std::string& out_path) {
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> groups;  // gap -> (miss, total)
  for (const auto& row : t.rows) {
    auto gap = static_cast<std::int64_t>(num(row, 2));
    auto& g = groups[gap];
    g.first += static_cast<std::int64_t>(num(row, 3));
    g.second += 1;
  }
  CsvFile csv(out_path, "gap,gap_sq,miss_prob,se,replicas");
  for (const auto& [gap, g] : groups) {
    double p = static_cast<double>(g.first) / static_cast<double>(g.second);
    double se = std::sqrt(p * (1 - p) / static_cast<double>(g.second));
    csv.os() << gap << ',' << gap * gap << ',' << fmt_double(p) << ',' << fmt_double(se) << ','
             << g.second << '\n';
  }
  csv.finish(out_path);
}

void plot_zeroprob(const CsvTable& t, const ExperimentConfig& cfg, const std::string& out_path) {
  const double scale =
      cfg.cap_radius / std::pow(static_cast<double>(cfg.z_distance), cfg.dim - 1);
  CsvFile csv(out_path, "lambda,abscissa,neg_log_estimate,se_neg_log,replicas");
  for (const auto& row : t.rows) {
    double lambda = num(row, 0), p = num(row, 1), se = num(row, 2);
    double neg_log = -std::log(p);
    double se_nl = p > 0 ? se / p : std::numeric_limits<double>::infinity();
    csv.os() << fmt_double(lambda) << ',' << fmt_double(lambda * scale) << ','
             << fmt_double(neg_log) << ',' << fmt_double(se_nl) << ','
             << static_cast<std::int64_t>(num(row, 3)) << '\n';
  }
  csv.finish(out_path);
}

}  // namespace

void emit_plot_data(const std::string& results_csv, PlotKind kind, const ExperimentConfig& cfg,
                    const std::string& out_path) {
  switch (kind) {
    case PlotKind::DeltaVsSqrtLog:
      plot_delta(read_csv(results_csv, "replica,n,delta_inner,delta_outer,seed"), out_path);
      return;
    case PlotKind::MissprobVsGap2:
      plot_missprob(read_csv(results_csv, "replica,n,gap,miss,seed"), out_path);
      return;
    case PlotKind::ZeroprobVsLambda:
      plot_zeroprob(read_csv(results_csv, "grid_value,estimate,stderr,replicas,seed"), cfg,
                    out_path);
      return;
  }
  throw std::invalid_argument("plot-data: unhandled kind");
}

}  // namespace idla::cli
