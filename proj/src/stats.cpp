#include "idla/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "idla/core.hpp"
#include "idla/errors.hpp"
#include "idla/geometry.hpp"
#include "idla/parallel.hpp"
#include "idla/particle_config.hpp"
#include "idla/rng.hpp"
#include "idla/walk.hpp"

namespace idla::stats {

void ScalingProfile::validate() const {
  for (double v : {alpha, beta, gamma})
    if (!(v >= 0) || !std::isfinite(v))
      throw std::invalid_argument("ScalingProfile: alpha, beta, gamma must be finite and >= 0");
}

double ScalingProfile::h(double n) const {
  if (n <= 1) return 0;
  double ln = std::log(n);
  if (!d2_variant) return alpha * std::sqrt(ln);
  double v = ln * std::log(ln);
  return v > 0 ? alpha * std::sqrt(v) : 0;
}

double ScalingProfile::L(double n) const {
  if (n <= 1) return 0;
  return gamma * std::sqrt(std::log(n));
}

double ScalingProfile::Lbar(double n) const {
  if (n <= 1) return 0;
  return beta * std::sqrt(std::log(n));
}

std::vector<double> ScalingProfile::telescope_widths(double R) const {
  if (!(R >= 3)) throw std::invalid_argument("telescope_widths: R must be >= 3");
  std::vector<double> widths;
  double lr = std::log(R);
  for (int i = 1;; ++i) {
    double w = R / (i * lr);
    if (w < 1) break;
    widths.push_back(w);
  }
  return widths;
}

double inner_error(const core::Cluster& cluster, std::int64_t n) {
  return static_cast<double>(n) -
         std::sqrt(static_cast<double>(cluster.min_unoccupied_norm2()));
}

double outer_error(const core::Cluster& cluster, std::int64_t n) {
  if (cluster.occupied_count() == 0)
    throw std::invalid_argument("outer_error: cluster is empty");
  return std::sqrt(static_cast<double>(cluster.max_norm2())) - static_cast<double>(n);
}

bool directional_miss(const core::Cluster& cluster, const Site& z) {
  return !cluster.contains(z);
}

namespace {

core::Cluster grow_replica(int dim, std::int64_t particles, walk::RngStream& rng,
                           double budget_factor) {
  core::Cluster cl(dim, core::radius_hint(dim, particles));
  auto src = core::source_of(rng, dim);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, particles), src, budget_factor);
  return cl;
}

void check_gaps(const std::vector<std::int64_t>& gaps, std::int64_t n) {
  for (std::int64_t g : gaps)
    if (g < 1 || g > n) throw std::invalid_argument("gap must lie in [1, n]");
}

}  // namespace

std::vector<ErrorRecord> shape_errors(int dim, std::int64_t n, std::int64_t replicas,
                                      std::uint64_t seed, int threads, double budget_factor) {
  if (n < 1) throw std::invalid_argument("shape_errors: n must be >= 1");
  if (replicas < 1) throw std::invalid_argument("shape_errors: replicas must be >= 1");
  const std::int64_t particles = geom::ball_count(dim, static_cast<double>(n));
  std::vector<ErrorRecord> records(static_cast<std::size_t>(replicas));
  parallel_for(replicas, threads, [&](std::int64_t r) {
    walk::RngStream rng(walk::substream({seed, static_cast<std::uint64_t>(r)}), 0);
    core::Cluster cl = grow_replica(dim, particles, rng, budget_factor);
    records[static_cast<std::size_t>(r)] =
        ErrorRecord{n, inner_error(cl, n), outer_error(cl, n), seed, r};
  });
  return records;
}

std::vector<DirectionalRecord> directional_experiment(int dim, std::int64_t n,
                                                      const std::vector<std::int64_t>& gaps,
                                                      std::int64_t replicas, std::uint64_t seed,
                                                      int threads, double budget_factor) {
  if (n < 1) throw std::invalid_argument("directional_experiment: n must be >= 1");
  if (replicas < 1) throw std::invalid_argument("directional_experiment: replicas must be >= 1");
  check_gaps(gaps, n);
  const std::int64_t particles = geom::ball_count(dim, static_cast<double>(n));
  std::vector<DirectionalRecord> records(static_cast<std::size_t>(replicas) * gaps.size());
  parallel_for(replicas, threads, [&](std::int64_t r) {
    walk::RngStream rng(walk::substream({seed, static_cast<std::uint64_t>(r)}), 0);
    core::Cluster cl = grow_replica(dim, particles, rng, budget_factor);
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
      Site z = Site::axis(dim, 0, static_cast<std::int32_t>(n - gaps[gi]));
      records[static_cast<std::size_t>(r) * gaps.size() + gi] =
          DirectionalRecord{r, n, gaps[gi], directional_miss(cl, z), seed};
    }
  });
  return records;
}

std::vector<VisitRow> mean_visits_lower_trend(int dim, std::int64_t n,
                                              const std::vector<std::int64_t>& gaps,
                                              std::int64_t replicas, std::uint64_t seed,
                                              int threads, double budget_factor) {
  if (n < 1) throw std::invalid_argument("mean_visits_lower_trend: n must be >= 1");
  if (replicas < 1) throw std::domain_error("mean_visits_lower_trend: replicas must be >= 1");
  check_gaps(gaps, n);
  const std::int64_t particles = geom::ball_count(dim, static_cast<double>(n));
  // samples[gi][r] = visit count at the axis target for gap gi, replica r
  std::vector<std::vector<double>> samples(gaps.size());
  for (auto& s : samples) s.assign(static_cast<std::size_t>(replicas), 0.0);
  parallel_for(replicas, threads, [&](std::int64_t r) {
    for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
      const std::int64_t radius = n - gaps[gi];
      Site z = Site::axis(dim, 0, static_cast<std::int32_t>(radius));
      walk::RngStream rng(
          walk::substream({seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(gaps[gi])}),
          0);
      core::Cluster cl(dim, core::radius_hint(dim, particles));
      auto src = core::source_of(rng, dim);
      core::WaveOptions opt;
      opt.track_visits = true;
      opt.budget_factor = budget_factor;
      auto wave = core::wave_run(cl, core::ParticleConfig::at_origin(dim, particles),
                                 static_cast<double>(radius), src, opt);
      auto it = wave.visits.find(z);
      samples[gi][static_cast<std::size_t>(r)] =
          it == wave.visits.end() ? 0.0 : static_cast<double>(it->second);
    }
  });
  std::vector<VisitRow> rows;
  rows.reserve(gaps.size());
  for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
    double mean = 0;
    for (double v : samples[gi]) mean += v;
    mean /= static_cast<double>(replicas);
    double var = 0;
    for (double v : samples[gi]) var += (v - mean) * (v - mean);
    double se = replicas > 1
                    ? std::sqrt(var / static_cast<double>(replicas - 1) /
                                static_cast<double>(replicas))
                    : 0.0;
    rows.push_back(VisitRow{gaps[gi], mean, se, replicas});
  }
  return rows;
}

FitResult scaling_fit(const std::vector<ErrorRecord>& records, FitModel model, ErrorSide side) {
  std::map<std::int64_t, std::pair<double, std::int64_t>> groups;  // n -> (sum, count)
  for (const auto& rec : records) {
    auto& g = groups[rec.n];
    g.first += side == ErrorSide::Inner ? rec.delta_inner : rec.delta_outer;
    g.second += 1;
  }
  if (groups.size() < 3)
    throw std::domain_error("scaling_fit: need at least 3 distinct radii");
  std::vector<double> xs, ys;
  for (const auto& [n, g] : groups) {
    double ln = n > 1 ? std::log(static_cast<double>(n)) : 0.0;
    xs.push_back(model == FitModel::SqrtLog ? std::sqrt(ln) : ln);
    ys.push_back(g.first / static_cast<double>(g.second));
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  if (sxx <= 0) throw std::domain_error("scaling_fit: degenerate regressor");
  double slope = sxy / sxx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double res = ys[i] - slope * xs[i];
    rss += res * res;
  }
  double se = std::sqrt(rss / static_cast<double>(xs.size() - 1) / sxx);
  return FitResult{slope, se, static_cast<std::int64_t>(groups.size())};
}

TentacleReport tentacle_experiment(int dim, std::int64_t n, const ScalingProfile& profile,
                                   std::uint64_t seed, double budget_factor) {
  if (n < 10) throw std::invalid_argument("tentacle_experiment: n must be >= 10");
  profile.validate();
  const double nn = static_cast<double>(n);
  const double h = profile.h(nn);
  const double L = profile.L(nn);
  const std::int64_t b_n = geom::ball_count(dim, nn);
  const std::int64_t lambda = geom::shell_count(dim, nn, nn + h);

  walk::RngStream pois(walk::substream({seed, 1, 2}), 0);
  const std::int64_t x_n = walk::poisson_sample(static_cast<double>(lambda), pois);

  TentacleReport rep;
  rep.n = n;
  rep.lambda_n = static_cast<double>(lambda);
  rep.x_n = x_n;
  rep.poisson_ok = x_n <= 2 * lambda;

  core::Cluster cl(dim, core::radius_hint(dim, b_n + x_n, nn + 4 * h + 8));
  walk::RngStream grow(walk::substream({seed, 0}), 0);
  auto gsrc = core::source_of(grow, dim);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, b_n), gsrc, budget_factor);
  rep.delta_inner_wave1 = inner_error(cl, n);

  // greens: pause on the sphere of radius n - L, then release
  walk::RngStream green(walk::substream({seed, 1}), 0);
  auto src = core::source_of(green, dim);
  core::WaveOptions opt;
  opt.budget_factor = budget_factor;
  auto wave = core::wave_run(cl, core::ParticleConfig::at_origin(dim, x_n),
                             std::max(0.0, nn - L), src, opt);
  rep.paused_sites = wave.stopped.distinct_sites();
  rep.paused_total = wave.stopped.total();
  core::grow_sequential(cl, wave.stopped, src, budget_factor);

  rep.protrusion = cl.max_norm2() > geom::ball_norm2_bound(nn + 4 * h);
  rep.r_n = geom::rho(dim, static_cast<double>(b_n + x_n));
  rep.delta_outer_final = outer_error(cl, rep.r_n);
  rep.final_size = cl.occupied_count();
  return rep;
}

DeepHoleRun deep_hole_experiment(int dim, std::int64_t n, const ScalingProfile& profile,
                                 std::uint64_t seed, double budget_factor) {
  if (n < 10) throw std::invalid_argument("deep_hole_experiment: n must be >= 10");
  profile.validate();
  if (profile.beta < profile.alpha)
    throw std::invalid_argument("deep_hole_experiment: beta must be >= alpha");
  const double nn = static_cast<double>(n);
  const double h_n = profile.h(nn);
  if (!(h_n > 0))
    throw std::invalid_argument("deep_hole_experiment: h(n) must be positive (alpha > 0)");

  const std::int64_t b_n = geom::ball_count(dim, nn);
  const std::int64_t waves = static_cast<std::int64_t>(nn / (2 * h_n));

  DeepHoleRun run;
  run.n = n;

  core::Cluster cl(dim, core::radius_hint(dim, b_n, 2 * nn + 8 * h_n + 16));
  {
    walk::RngStream grow(walk::substream({seed, 0}), 0);
    auto gsrc = core::source_of(grow, dim);
    core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, b_n), gsrc, budget_factor);
  }
  run.delta_inner_wave0 = inner_error(cl, n);

  std::int64_t r_prev = geom::rho(dim, static_cast<double>(b_n));
  bool prev_a = run.delta_inner_wave0 > profile.h(static_cast<double>(r_prev));
  std::int64_t total_x = 0;

  std::vector<Site> pause;
  std::vector<std::uint64_t> cut;
  std::vector<std::uint8_t> in_cap;
  for (std::int64_t k = 1; k <= waves; ++k) {
    const double rp = static_cast<double>(r_prev);
    const std::int64_t lambda = geom::shell_count(dim, rp, rp + 2 * profile.h(rp));
    walk::RngStream pois(
        walk::substream({seed, static_cast<std::uint64_t>(k), 2}), 0);
    const std::int64_t x_k = walk::poisson_sample(static_cast<double>(lambda), pois);
    total_x += x_k;
    const std::int64_t r_k = geom::rho(dim, static_cast<double>(b_n + total_x));

    const Site z_k = cl.min_unoccupied();
    const std::int64_t zk_n2 = z_k.norm2();
    const double zk_norm = std::sqrt(static_cast<double>(zk_n2));

    DeepHoleTrialRecord rec;
    rec.k = k;
    rec.r_k = r_k;
    rec.x_k = x_k;
    rec.lambda_k = static_cast<double>(lambda);
    rec.z_k = z_k;
    rec.zk_norm = zk_norm;
    rec.event_c = 3 * x_k >= 2 * lambda && x_k <= 2 * lambda;
    rec.prev_event_a = prev_a;
    // Eq-style sandwich for the hole: the upper end is exact in integers,
    // the lower end tolerates the norm's rounding
    rec.zk_bound_ok = zk_n2 <= (r_prev + 1) * (r_prev + 1) &&
                      zk_norm >= rp - profile.h(rp) - 1e-9;

    // Every site of norm below |z_k| is occupied (z_k is the minimal hole),
    // so a green explorer cannot settle before reaching the shell: its pause
    // position does not depend on the launch schedule.
    const std::int64_t q_stop = zk_n2 - 1;
    const double lbar_prev = profile.Lbar(rp);
    const double probe_radius = zk_norm + 7 * lbar_prev;
    const std::int64_t q_probe = geom::ball_norm2_bound(probe_radius);
    const std::int64_t q_cap = geom::ball_norm2_bound(profile.Lbar(static_cast<double>(r_k)));
    const std::uint64_t walk_budget = walk::step_budget(2 * (zk_norm + 2), budget_factor);
    const std::uint64_t probe_budget = walk::step_budget(2 * (probe_radius + 2), budget_factor);

    pause.assign(static_cast<std::size_t>(x_k), Site());
    cut.assign(static_cast<std::size_t>(x_k), 0);
    in_cap.assign(static_cast<std::size_t>(x_k), 0);
    const std::uint64_t wave_stream = walk::substream({seed, static_cast<std::uint64_t>(k)});
    const Site origin = Site::origin(dim);
    auto inside_shell = [q_stop](const Site& s) { return s.norm2() <= q_stop; };
    auto inside_probe = [q_probe](const Site& s) { return s.norm2() <= q_probe; };
    for (std::int64_t j = 0; j < x_k; ++j) {
      walk::RngStream rng(wave_stream, static_cast<std::uint64_t>(j));
      walk::StreamSource src{&rng, static_cast<std::uint32_t>(2 * dim)};
      auto w = walk::run_until_exit(origin, inside_shell, src, walk_budget);
      pause[static_cast<std::size_t>(j)] = w.position;
      cut[static_cast<std::size_t>(j)] = rng.counter();
      in_cap[static_cast<std::size_t>(j)] = norm2_diff(w.position, z_k) <= q_cap ? 1 : 0;
      // probe: continue the same walk until it hits the hole or drifts past
      // the far shell, then rewind the stream for the release
      auto probe = walk::run_until_hit_or_exit(w.position, z_k, inside_probe, src, probe_budget);
      if (probe.hit) {
        if (in_cap[static_cast<std::size_t>(j)])
          ++rec.cap_hits;
        else
          ++rec.far_hits;
      }
    }
    rec.event_i = rec.cap_hits + rec.far_hits == 0;

    // release: replay each walk from its pause position (seek undoes the
    // probe draws) and settle for real, in explorer order
    for (std::int64_t j = 0; j < x_k; ++j) {
      walk::RngStream rng(wave_stream, static_cast<std::uint64_t>(j));
      rng.seek(cut[static_cast<std::size_t>(j)]);
      auto src = core::source_of(rng, dim);
      Site rest = core::settle(cl, pause[static_cast<std::size_t>(j)], src,
                               core::growth_budget(cl, probe_radius + 2, budget_factor));
      cl.insert(rest);
    }

    rec.event_a = inner_error(cl, r_k) > profile.h(static_cast<double>(r_k));
    rec.event_outer = outer_error(cl, r_k) >= profile.Lbar(static_cast<double>(r_k));
    if (!rec.prev_event_a && rec.event_c && !rec.zk_bound_ok) ++run.zk_violations;
    run.waves.push_back(rec);
    prev_a = rec.event_a;
    r_prev = r_k;
  }

  run.final_size = cl.occupied_count();
  return run;
}

}  // namespace idla::stats
