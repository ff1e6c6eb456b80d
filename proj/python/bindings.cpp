#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "idla/core.hpp"
#include "idla/experiments.hpp"
#include "idla/geometry.hpp"
#include "idla/harmonic.hpp"
#include "idla/oracle.hpp"
#include "idla/stats.hpp"
#include "idla/version.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

using idla::Site;
namespace core = idla::core;
namespace geom = idla::geom;
namespace walk = idla::walk;
namespace stats = idla::stats;
namespace harmonic = idla::harmonic;
namespace oracle = idla::oracle;

namespace {

Site site_of(const std::vector<std::int32_t>& cs) {
  if (cs.empty() || cs.size() > Site::kMaxDim)
    throw std::invalid_argument("site: dimension must be 1.." + std::to_string(Site::kMaxDim));
  return Site(cs.data(), static_cast<int>(cs.size()));
}

py::tuple tuple_of(const Site& s) {
  py::tuple t(s.dim());
  for (int i = 0; i < s.dim(); ++i) t[i] = s[i];
  return t;
}

py::list tuples_of(const std::vector<Site>& sites) {
  py::list out;
  for (const Site& s : sites) out.append(tuple_of(s));
  return out;
}

std::vector<Site> sites_of(const std::vector<std::vector<std::int32_t>>& raw) {
  std::vector<Site> out;
  out.reserve(raw.size());
  for (const auto& cs : raw) out.push_back(site_of(cs));
  return out;
}

stats::ScalingProfile profile_of(double alpha, double beta, double gamma, bool d2_variant) {
  stats::ScalingProfile p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.d2_variant = d2_variant;
  return p;
}

stats::FitModel model_of(const std::string& name) {
  if (name == "sqrt_log") return stats::FitModel::SqrtLog;
  if (name == "log") return stats::FitModel::Log;
  throw std::invalid_argument("model must be 'sqrt_log' or 'log', got '" + name + "'");
}

stats::ErrorSide side_of(const std::string& name) {
  if (name == "inner") return stats::ErrorSide::Inner;
  if (name == "outer") return stats::ErrorSide::Outer;
  throw std::invalid_argument("side must be 'inner' or 'outer', got '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "internal DLA growth, fluctuation statistics, and harmonic-measure probes";
  m.attr("__version__") = idla::kVersion;

  // ---- geometry ----
  m.def("ball_count", &geom::ball_count, "dim"_a, "radius"_a,
        "number of lattice sites with |x| < radius");
  m.def("rho", &geom::rho, "dim"_a, "volume"_a,
        "largest n with ball_count(dim, n) <= volume");
  m.def("ball_norm2_bound", &geom::ball_norm2_bound, "r"_a,
        "largest integer squared-norm strictly below r^2");
  m.def(
      "sphere_shell", [](const std::vector<std::int32_t>& z) { return tuples_of(geom::sphere_shell(site_of(z))); },
      "z"_a, "outer boundary of the open ball of radius |z|; contains z");

  // ---- growth ----
  m.def(
      "grow",
      [](int dim, std::int64_t n, std::uint64_t seed, double budget_factor) {
        const std::int64_t particles = geom::ball_count(dim, static_cast<double>(n));
        walk::RngStream rng(walk::substream({seed, 0}), 0);
        core::Cluster cl(dim, core::radius_hint(dim, particles));
        auto src = core::source_of(rng, dim);
        core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, particles), src,
                              budget_factor);
        return tuples_of(cl.sites());
      },
      "dim"_a, "n"_a, "seed"_a, "budget_factor"_a = 1e4,
      "grow ball_count(dim, n) explorers from the origin; same streams as the "
      "grow subcommand, so equal seeds give equal sets");

  // ---- fluctuation statistics ----
  py::class_<stats::ErrorRecord>(m, "ErrorRecord")
      .def(py::init([](std::int64_t n, double delta_inner, double delta_outer, std::uint64_t seed,
                       std::int64_t replica) {
             return stats::ErrorRecord{n, delta_inner, delta_outer, seed, replica};
           }),
           "n"_a, "delta_inner"_a, "delta_outer"_a = 0.0, "seed"_a = 0, "replica"_a = 0)
      .def_readonly("n", &stats::ErrorRecord::n)
      .def_readonly("delta_inner", &stats::ErrorRecord::delta_inner)
      .def_readonly("delta_outer", &stats::ErrorRecord::delta_outer)
      .def_readonly("seed", &stats::ErrorRecord::seed)
      .def_readonly("replica", &stats::ErrorRecord::replica);

  py::class_<stats::DirectionalRecord>(m, "DirectionalRecord")
      .def_readonly("replica", &stats::DirectionalRecord::replica)
      .def_readonly("n", &stats::DirectionalRecord::n)
      .def_readonly("gap", &stats::DirectionalRecord::gap)
      .def_readonly("miss", &stats::DirectionalRecord::miss)
      .def_readonly("seed", &stats::DirectionalRecord::seed);

  py::class_<stats::VisitRow>(m, "VisitRow")
      .def_readonly("gap", &stats::VisitRow::gap)
      .def_readonly("mean", &stats::VisitRow::mean)
      .def_readonly("se", &stats::VisitRow::se)
      .def_readonly("replicas", &stats::VisitRow::replicas);

  py::class_<stats::FitResult>(m, "FitResult")
      .def_readonly("slope", &stats::FitResult::slope)
      .def_readonly("se", &stats::FitResult::se)
      .def_readonly("radii", &stats::FitResult::radii);

  m.def("shape_errors", &stats::shape_errors, "dim"_a, "n"_a, "replicas"_a, "seed"_a,
        "threads"_a = 1, "budget_factor"_a = 1e4,
        "inner/outer shape errors of replica clusters of b(n) explorers");
  m.def("directional_experiment", &stats::directional_experiment, "dim"_a, "n"_a, "gaps"_a,
        "replicas"_a, "seed"_a, "threads"_a = 1, "budget_factor"_a = 1e4,
        "per replica and gap g, whether the axis site at norm n - g was missed");
  m.def("mean_visits_lower_trend", &stats::mean_visits_lower_trend, "dim"_a, "n"_a, "gaps"_a,
        "replicas"_a, "seed"_a, "threads"_a = 1, "budget_factor"_a = 1e4,
        "mean visit count at the axis site for waves paused at radius n - g");
  m.def(
      "scaling_fit",
      [](const std::vector<stats::ErrorRecord>& records, const std::string& model,
         const std::string& side) { return stats::scaling_fit(records, model_of(model), side_of(side)); },
      "records"_a, "model"_a = "sqrt_log", "side"_a = "inner",
      "through-origin fit of mean error per n against sqrt(log n) or log n");

  // ---- overshoot and deep-hole protocols ----
  py::class_<stats::TentacleReport>(m, "TentacleReport")
      .def_readonly("n", &stats::TentacleReport::n)
      .def_readonly("lambda_n", &stats::TentacleReport::lambda_n)
      .def_readonly("x_n", &stats::TentacleReport::x_n)
      .def_readonly("poisson_ok", &stats::TentacleReport::poisson_ok)
      .def_readonly("delta_inner_wave1", &stats::TentacleReport::delta_inner_wave1)
      .def_readonly("paused_sites", &stats::TentacleReport::paused_sites)
      .def_readonly("paused_total", &stats::TentacleReport::paused_total)
      .def_readonly("protrusion", &stats::TentacleReport::protrusion)
      .def_readonly("r_n", &stats::TentacleReport::r_n)
      .def_readonly("delta_outer_final", &stats::TentacleReport::delta_outer_final)
      .def_readonly("final_size", &stats::TentacleReport::final_size);

  py::class_<stats::DeepHoleTrialRecord>(m, "DeepHoleTrialRecord")
      .def_readonly("k", &stats::DeepHoleTrialRecord::k)
      .def_readonly("r_k", &stats::DeepHoleTrialRecord::r_k)
      .def_readonly("x_k", &stats::DeepHoleTrialRecord::x_k)
      .def_readonly("lambda_k", &stats::DeepHoleTrialRecord::lambda_k)
      .def_property_readonly("z_k",
                             [](const stats::DeepHoleTrialRecord& r) { return tuple_of(r.z_k); })
      .def_readonly("zk_norm", &stats::DeepHoleTrialRecord::zk_norm)
      .def_readonly("event_a", &stats::DeepHoleTrialRecord::event_a)
      .def_readonly("event_c", &stats::DeepHoleTrialRecord::event_c)
      .def_readonly("event_i", &stats::DeepHoleTrialRecord::event_i)
      .def_readonly("event_outer", &stats::DeepHoleTrialRecord::event_outer)
      .def_readonly("cap_hits", &stats::DeepHoleTrialRecord::cap_hits)
      .def_readonly("far_hits", &stats::DeepHoleTrialRecord::far_hits)
      .def_readonly("zk_bound_ok", &stats::DeepHoleTrialRecord::zk_bound_ok)
      .def_readonly("prev_event_a", &stats::DeepHoleTrialRecord::prev_event_a);

  py::class_<stats::DeepHoleRun>(m, "DeepHoleRun")
      .def_readonly("waves", &stats::DeepHoleRun::waves)
      .def_readonly("n", &stats::DeepHoleRun::n)
      .def_readonly("final_size", &stats::DeepHoleRun::final_size)
      .def_readonly("zk_violations", &stats::DeepHoleRun::zk_violations)
      .def_readonly("delta_inner_wave0", &stats::DeepHoleRun::delta_inner_wave0);

  m.def(
      "tentacle_experiment",
      [](int dim, std::int64_t n, double alpha, double beta, double gamma, bool d2_variant,
         std::uint64_t seed, double budget_factor) {
        return stats::tentacle_experiment(dim, n, profile_of(alpha, beta, gamma, d2_variant), seed,
                                          budget_factor);
      },
      "dim"_a, "n"_a, "alpha"_a = 0.5, "beta"_a = 0.5, "gamma"_a = 0.5, "d2_variant"_a = false,
      "seed"_a = 1, "budget_factor"_a = 1e4,
      "one overshoot trial: Poisson burst paused at n - L(n), then released");
  m.def(
      "deep_hole_experiment",
      [](int dim, std::int64_t n, double alpha, double beta, double gamma, bool d2_variant,
         std::uint64_t seed, double budget_factor) {
        return stats::deep_hole_experiment(dim, n, profile_of(alpha, beta, gamma, d2_variant),
                                           seed, budget_factor);
      },
      "dim"_a, "n"_a, "alpha"_a = 0.5, "beta"_a = 0.5, "gamma"_a = 0.5, "d2_variant"_a = false,
      "seed"_a = 1, "budget_factor"_a = 1e4,
      "iterated deep-hole waves with pause, probe, rewind, and release");

  // ---- oracles ----
  m.def(
      "oracle_tv",
      [](int k, int dim, std::int64_t samples, std::uint64_t seed) {
        return oracle::tv_distance(oracle::cluster_distribution_exact(k, dim),
                                   oracle::cluster_distribution_mc(k, dim, samples, seed));
      },
      "k"_a, "dim"_a, "samples"_a, "seed"_a,
      "total variation between the exact k-explorer shape distribution and a "
      "Monte Carlo one");

  // ---- harmonic probes ----
  py::class_<harmonic::SplitReport>(m, "SplitReport")
      .def_readonly("degenerate", &harmonic::SplitReport::degenerate)
      .def_readonly("mean1", &harmonic::SplitReport::mean1)
      .def_readonly("var1", &harmonic::SplitReport::var1)
      .def_readonly("dispersion1", &harmonic::SplitReport::dispersion1)
      .def_readonly("dispersion_p1", &harmonic::SplitReport::dispersion_p1)
      .def_readonly("mean2", &harmonic::SplitReport::mean2)
      .def_readonly("var2", &harmonic::SplitReport::var2)
      .def_readonly("dispersion2", &harmonic::SplitReport::dispersion2)
      .def_readonly("dispersion_p2", &harmonic::SplitReport::dispersion_p2)
      .def_readonly("chi2", &harmonic::SplitReport::chi2)
      .def_readonly("chi2_df", &harmonic::SplitReport::chi2_df)
      .def_readonly("independence_p", &harmonic::SplitReport::independence_p)
      .def_readonly("independence_tested", &harmonic::SplitReport::independence_tested)
      .def_readonly("replicas", &harmonic::SplitReport::replicas);

  py::class_<harmonic::BoundFit>(m, "BoundFit")
      .def_readonly("name", &harmonic::BoundFit::name)
      .def_readonly("fitted_constant", &harmonic::BoundFit::fitted_constant)
      .def_readonly("lo", &harmonic::BoundFit::lo)
      .def_readonly("hi", &harmonic::BoundFit::hi)
      .def_readonly("r2", &harmonic::BoundFit::r2)
      .def_readonly("sample_size", &harmonic::BoundFit::sample_size)
      .def_readonly("points", &harmonic::BoundFit::points);

  m.def(
      "poisson_split_test",
      [](double lambda, const std::vector<std::int32_t>& z,
         const std::vector<std::vector<std::int32_t>>& region1,
         const std::vector<std::vector<std::int32_t>>& region2, double depth1, double depth2,
         std::int64_t replicas, std::uint64_t seed) {
        return harmonic::poisson_split_test(lambda, site_of(z), sites_of(region1),
                                            sites_of(region2), depth1, depth2, replicas, seed);
      },
      "lam"_a, "z"_a, "region1"_a, "region2"_a, "depth1"_a, "depth2"_a, "replicas"_a, "seed"_a,
      "Poisson(lam) walkers from the origin, margin counts over two disjoint "
      "shell regions: dispersion and independence report");
  m.def(
      "joint_zero_probe",
      [](const std::vector<double>& lambda_grid, const std::vector<std::int32_t>& z, double R,
         std::int64_t replicas, std::uint64_t seed, double escape_factor) {
        return harmonic::joint_zero_probe(lambda_grid, site_of(z), R, replicas, seed,
                                          escape_factor);
      },
      "lambda_grid"_a, "z"_a, "R"_a, "replicas"_a, "seed"_a, "escape_factor"_a = 25.0,
      "P(both shell counts zero) across a lambda grid, with the through-origin "
      "-log P fit");

  // ---- experiment driver ----
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        auto cfg = idla::cli::config_from_json(nlohmann::json::parse(config_json));
        return idla::cli::run(cfg).manifest_path;
      },
      "config_json"_a,
      "run one experiment from a JSON config document; writes the CSVs and "
      "returns the manifest path");
}
