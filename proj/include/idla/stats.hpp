#pragma once

#include <cstdint>
#include <vector>

#include "idla/cluster.hpp"
#include "idla/site.hpp"

namespace idla::stats {

// The radius scales of the experiments, all multiples of sqrt(log n):
// h gates hole depth, L sets the pause sphere, Lbar the probe/outer scale.
// The d2 variant switches h to alpha * sqrt(log n * log log n).
struct ScalingProfile {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  bool d2_variant = false;

  void validate() const;  // nonnegative and finite

  double h(double n) const;
  double L(double n) const;
  double Lbar(double n) const;

  // analysis-only shell widths R / (i log R), i = 1, 2, ... while >= 1;
  // never used to steer walks
  std::vector<double> telescope_widths(double R) const;
};

// per-replica radius errors of a grown cluster
struct ErrorRecord {
  std::int64_t n = 0;
  double delta_inner = 0;
  double delta_outer = 0;
  std::uint64_t seed = 0;
  std::int64_t replica = 0;
};

struct DirectionalRecord {
  std::int64_t replica = 0;
  std::int64_t n = 0;
  std::int64_t gap = 0;
  bool miss = false;
  std::uint64_t seed = 0;
};

struct VisitRow {
  std::int64_t gap = 0;
  double mean = 0;
  double se = 0;
  std::int64_t replicas = 0;
};

// n minus the smallest unoccupied norm: how deep the worst hole reaches
// below the nominal radius. An empty cluster gives n (the origin is free).
double inner_error(const core::Cluster& cluster, std::int64_t n);

// largest occupied norm minus n; negative when the cluster sits strictly
// inside the nominal ball
double outer_error(const core::Cluster& cluster, std::int64_t n);

// the direction z went uncovered
bool directional_miss(const core::Cluster& cluster, const Site& z);

// grows `replicas` aggregates of b(n) origin explorers (replica r draws from
// stream r of `seed`, so results are identical for any thread count) and
// records both radius errors
std::vector<ErrorRecord> shape_errors(int dim, std::int64_t n, std::int64_t replicas,
                                      std::uint64_t seed, int threads = 1,
                                      double budget_factor = 1e4);

// per replica and gap g, whether the axis site at norm n-g was missed
std::vector<DirectionalRecord> directional_experiment(int dim, std::int64_t n,
                                                      const std::vector<std::int64_t>& gaps,
                                                      std::int64_t replicas, std::uint64_t seed,
                                                      int threads = 1, double budget_factor = 1e4);

// For each gap g, launches b(n) explorers on an empty board, pausing them on
// the sphere of radius n-g, and averages the visit count at the axis site z
// with |z| = n-g (the pause site itself, so visits(z) = walkers paused at z).
// Means are reported with standard errors; trend checks live with the caller.
std::vector<VisitRow> mean_visits_lower_trend(int dim, std::int64_t n,
                                              const std::vector<std::int64_t>& gaps,
                                              std::int64_t replicas, std::uint64_t seed,
                                              int threads = 1, double budget_factor = 1e4);

// one-shot overshoot protocol: grow b(n), inject a Poisson(lambda_n) burst at
// the origin, pause it on the sphere of radius n - L(n), then release and see
// whether anything pokes past n + 4 h(n)
struct TentacleReport {
  std::int64_t n = 0;
  double lambda_n = 0;
  std::int64_t x_n = 0;    // the Poisson draw
  bool poisson_ok = false; // x_n <= 2 lambda_n
  double delta_inner_wave1 = 0;
  std::int64_t paused_sites = 0;
  std::int64_t paused_total = 0;
  bool protrusion = false;   // occupied site beyond n + 4 h(n)
  std::int64_t r_n = 0;      // rho(b(n) + x_n)
  double delta_outer_final = 0;
  std::int64_t final_size = 0;
};

TentacleReport tentacle_experiment(int dim, std::int64_t n, const ScalingProfile& profile,
                                   std::uint64_t seed, double budget_factor = 1e4);

// one wave of the iterated deep-hole protocol
struct DeepHoleTrialRecord {
  std::int64_t k = 0;
  std::int64_t r_k = 0;
  std::int64_t x_k = 0;
  double lambda_k = 0;
  Site z_k;
  double zk_norm = 0;
  bool event_a = false;      // inner error of wave k exceeds h(R_k)
  bool event_c = false;      // x_k within [2/3 lambda, 2 lambda]
  bool event_i = false;      // no paused walker's probe reached the hole or far shell
  bool event_outer = false;  // outer error at least Lbar(R_k)
  std::int64_t cap_hits = 0;
  std::int64_t far_hits = 0;
  bool zk_bound_ok = false;  // |z_k| within [R_{k-1} - h(R_{k-1}), R_{k-1} + 1]
  bool prev_event_a = false;
};

struct DeepHoleRun {
  std::vector<DeepHoleTrialRecord> waves;
  std::int64_t n = 0;
  std::int64_t final_size = 0;
  std::int64_t zk_violations = 0;  // waves where !prev_event_a && event_c && !zk_bound_ok
  double delta_inner_wave0 = 0;
};

// Iterates N = floor(n / 2h(n)) waves on top of a b(n) seed cluster. Each
// wave i draws X_i ~ Poisson(shell count of width 2 h(R_{i-1})), pauses the
// fresh explorers on the sphere just inside the deepest hole z_i, probes each
// paused walker for a hit on z_i (or escape far beyond), rewinds those probe
// draws, and releases the wave to settle. Needs beta >= alpha and h(n) > 0.
DeepHoleRun deep_hole_experiment(int dim, std::int64_t n, const ScalingProfile& profile,
                                 std::uint64_t seed, double budget_factor = 1e4);

enum class FitModel { SqrtLog, Log };
enum class ErrorSide { Inner, Outer };

struct FitResult {
  double slope = 0;
  double se = 0;
  std::int64_t radii = 0;  // distinct n values entering the fit
};

// through-origin least squares of mean delta per n against sqrt(log n) or
// log n; needs at least 3 distinct radii
FitResult scaling_fit(const std::vector<ErrorRecord>& records, FitModel model,
                      ErrorSide side = ErrorSide::Inner);

}  // namespace idla::stats
