#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idla/cluster.hpp"
#include "idla/experiments.hpp"
#include "idla/geometry.hpp"
#include "idla/version.hpp"

namespace cli = idla::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("idla_exp_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& p) {
  std::ifstream is(p);
  std::string line;
  REQUIRE(std::getline(is, line));
  return line;
}

std::int64_t data_rows(const std::string& p) {
  std::ifstream is(p);
  std::string line;
  std::int64_t rows = -1;  // skip header
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  return rows;
}

cli::ExperimentConfig base_config(const std::string& experiment, const std::string& out) {
  cli::ExperimentConfig cfg;
  cfg.experiment = experiment;
  cfg.out = out;
  cfg.seed = 17;
  return cfg;
}

template <typename Fn>
std::string invalid_argument_message(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "<no std::invalid_argument thrown>";
}

}  // namespace

TEST_CASE("config json round trip and diagnostics") {
  cli::ExperimentConfig cfg = base_config("shape", "somewhere");
  cfg.dim = 3;
  cfg.n = 24;
  cfg.alpha = 0.25;
  cfg.d2_variant = true;
  cfg.replicas = 12;
  cfg.threads = 2;
  cfg.gaps = {2, 5};
  cfg.lambda_grid = {1.5, 4.0};
  auto back = cli::config_from_json(cli::config_to_json(cfg));
  CHECK(back.experiment == cfg.experiment);
  CHECK(back.dim == cfg.dim);
  CHECK(back.n == cfg.n);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.d2_variant == cfg.d2_variant);
  CHECK(back.replicas == cfg.replicas);
  CHECK(back.seed == cfg.seed);
  CHECK(back.threads == cfg.threads);
  CHECK(back.out == cfg.out);
  CHECK(back.gaps == cfg.gaps);
  CHECK(back.lambda_grid == cfg.lambda_grid);

  auto msg = invalid_argument_message([] { cli::config_from_json(json{{"bogus", 1}}); });
  CHECK(msg.find("unknown field 'bogus'") != std::string::npos);
  msg = invalid_argument_message([] { cli::config_from_json(json{{"dim", "two"}}); });
  CHECK(msg.find("'dim'") != std::string::npos);
  CHECK_THROWS_AS(cli::config_from_json(json::array()), std::invalid_argument);

  auto bad = base_config("nonsense", "x");
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  auto dim1 = base_config("shape", "x");
  dim1.dim = 1;
  CHECK_THROWS_AS(dim1.validate(), std::invalid_argument);
  auto reps0 = base_config("shape", "x");
  reps0.replicas = 0;
  CHECK_THROWS_AS(reps0.validate(), std::invalid_argument);
  auto nb = base_config("shape", "x");
  nb.budget_factor = 0;
  CHECK_THROWS_AS(nb.validate(), std::invalid_argument);
}

TEST_CASE("grow writes an exact-count snapshot and a loadable manifest") {
  TempDir tmp;
  auto cfg = base_config("grow", tmp.sub("g"));
  cfg.dim = 2;
  cfg.n = 5;
  cfg.seed = 1;
  auto man = cli::run(cfg);
  CHECK(man.version == std::string(idla::kVersion));
  REQUIRE(man.digests.count("snapshot.txt"));

  std::ifstream is(tmp.sub("g") + "/snapshot.txt");
  auto snap = idla::core::Cluster::read_snapshot(is);
  CHECK(snap.seed == 1);
  CHECK(snap.cluster.occupied_count() == idla::geom::ball_count(2, 5.0));

  // digest recorded in the manifest matches the bytes on disk
  CHECK(man.digests.at("snapshot.txt") ==
        cli::hex64(cli::fnv1a64_file(tmp.sub("g") + "/snapshot.txt")));

  // the manifest itself is a valid config source
  auto reloaded = cli::load_config_file(man.manifest_path);
  CHECK(reloaded.experiment == "grow");
  CHECK(reloaded.n == 5);
  CHECK(reloaded.seed == 1);
}

TEST_CASE("pinned csv headers") {
  TempDir tmp;

  auto shape = base_config("shape", tmp.sub("shape"));
  shape.n = 8;
  shape.replicas = 2;
  cli::run(shape);
  CHECK(first_line(tmp.sub("shape") + "/shape.csv") == "replica,n,delta_inner,delta_outer,seed");

  auto dir = base_config("directional", tmp.sub("dir"));
  dir.n = 8;
  dir.replicas = 2;
  dir.gaps = {1, 2};
  cli::run(dir);
  CHECK(first_line(tmp.sub("dir") + "/directional.csv") == "replica,n,gap,miss,seed");
  CHECK(data_rows(tmp.sub("dir") + "/directional.csv") == 4);  // replicas x gaps

  auto dh = base_config("deep-hole", tmp.sub("dh"));
  dh.dim = 3;
  dh.n = 10;
  dh.alpha = dh.beta = 0.6;
  dh.replicas = 1;
  cli::run(dh);
  CHECK(first_line(tmp.sub("dh") + "/deep_hole.csv") ==
        "replica,k,R_k,X_k,lambda_k,zk_norm,event_A,event_C,event_I,event_outer,seed");

  auto harm = base_config("harmonic", tmp.sub("harm"));
  harm.dim = 3;
  harm.lambda_grid = {0, 4, 8};
  harm.replicas = 200;
  harm.escape_factor = 12;
  cli::run(harm);
  CHECK(first_line(tmp.sub("harm") + "/harmonic.csv") == "grid_value,estimate,stderr,replicas,seed");
  CHECK(data_rows(tmp.sub("harm") + "/harmonic.csv") == 3);
}

TEST_CASE("thread count never changes output bytes") {
  TempDir tmp;
  auto one = base_config("shape", tmp.sub("t1"));
  one.n = 9;
  one.replicas = 6;
  one.threads = 1;
  auto eight = one;
  eight.out = tmp.sub("t8");
  eight.threads = 8;
  cli::run(one);
  cli::run(eight);
  CHECK(slurp(tmp.sub("t1") + "/shape.csv") == slurp(tmp.sub("t8") + "/shape.csv"));

  auto d1 = base_config("deep-hole", tmp.sub("d1"));
  d1.dim = 3;
  d1.n = 10;
  d1.alpha = d1.beta = 0.6;
  d1.replicas = 3;
  d1.threads = 1;
  auto d8 = d1;
  d8.out = tmp.sub("d8");
  d8.threads = 8;
  cli::run(d1);
  cli::run(d8);
  CHECK(slurp(tmp.sub("d1") + "/deep_hole.csv") == slurp(tmp.sub("d8") + "/deep_hole.csv"));

  // identical config twice -> identical digests (manifest invariant)
  auto again = one;
  again.out = tmp.sub("t1b");
  auto m1 = cli::run(one);
  auto m2 = cli::run(again);
  CHECK(m1.digests == m2.digests);
}

TEST_CASE("abelian-check schedules all match the one-shot set") {
  TempDir tmp;
  auto cfg = base_config("abelian-check", tmp.sub("ab"));
  cfg.dim = 2;
  cfg.n = 250;  // particle count for this experiment
  cfg.replicas = 6;
  cli::run(cfg);
  std::ifstream is(tmp.sub("ab") + "/abelian_check.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "replica,matches,seed");
  int rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ++rows;
    auto first_comma = line.find(',');
    auto second_comma = line.find(',', first_comma + 1);
    CHECK(line.substr(first_comma + 1, second_comma - first_comma - 1) == "1");
  }
  CHECK(rows == 6);
}

TEST_CASE("plot data aggregation") {
  TempDir tmp;

  // synthetic exact slope recovery
  {
    std::ofstream os(tmp.sub("synth.csv"));
    os << "replica,n,delta_inner,delta_outer,seed\n";
    for (std::int64_t n : {10, 20, 40, 80}) {
      double d = 2.0 * std::sqrt(std::log(static_cast<double>(n)));
      os << "0," << n << ',' << cli::fmt_double(d) << ",0,1\n";
    }
  }
  cli::ExperimentConfig cfg;
  cli::emit_plot_data(tmp.sub("synth.csv"), cli::PlotKind::DeltaVsSqrtLog, cfg,
                      tmp.sub("synth_plot.csv"));
  {
    std::ifstream is(tmp.sub("synth_plot.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line ==
          "n,sqrt_log_n,mean_delta_inner,se_delta_inner,mean_delta_outer,se_delta_outer,"
          "replicas,slope_inner,slope_outer");
    int rows = 0;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      ++rows;
      // slope_inner is the second-to-last column; exactly 2 by construction
      auto tail = line.rfind(',');
      auto head = line.rfind(',', tail - 1);
      double slope = std::stod(line.substr(head + 1, tail - head - 1));
      CHECK(slope == doctest::Approx(2.0).epsilon(1e-9));
    }
    CHECK(rows == 4);
  }

  // empty input -> header-only output
  {
    std::ofstream os(tmp.sub("empty.csv"));
    os << "replica,n,gap,miss,seed\n";
  }
  cli::emit_plot_data(tmp.sub("empty.csv"), cli::PlotKind::MissprobVsGap2, cfg,
                      tmp.sub("empty_plot.csv"));
  CHECK(slurp(tmp.sub("empty_plot.csv")) == "gap,gap_sq,miss_prob,se,replicas\n");

  // schema mismatch names both headers
  auto msg = invalid_argument_message([&] {
    cli::emit_plot_data(tmp.sub("empty.csv"), cli::PlotKind::DeltaVsSqrtLog, cfg,
                        tmp.sub("x.csv"));
  });
  CHECK(msg.find("expected `replica,n,delta_inner,delta_outer,seed`") != std::string::npos);
  CHECK(msg.find("found `replica,n,gap,miss,seed`") != std::string::npos);

  // zero-probability transform: abscissa = lambda * R / |z|^(d-1)
  {
    std::ofstream os(tmp.sub("harm.csv"));
    os << "grid_value,estimate,stderr,replicas,seed\n";
    os << "12,0.5,0.01,100,1\n";
  }
  cfg.dim = 3;
  cfg.z_distance = 6;
  cfg.cap_radius = 3;
  cli::emit_plot_data(tmp.sub("harm.csv"), cli::PlotKind::ZeroprobVsLambda, cfg,
                      tmp.sub("harm_plot.csv"));
  {
    std::ifstream is(tmp.sub("harm_plot.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line == "lambda,abscissa,neg_log_estimate,se_neg_log,replicas");
    std::getline(is, line);
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[1]) == doctest::Approx(12.0 * 3.0 / 36.0));
    CHECK(std::stod(cells[2]) == doctest::Approx(-std::log(0.5)));
    CHECK(std::stod(cells[3]) == doctest::Approx(0.02));
  }
}

TEST_CASE("doubles persist with full precision") {
  for (double v : {1.0 / 3.0, std::sqrt(2.0), 2.0, -0.0, 1e-300, 6.02214076e23}) {
    double back = std::stod(cli::fmt_double(v));
    CHECK(back == v);
  }
}
