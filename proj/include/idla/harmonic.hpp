#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "idla/particle_config.hpp"
#include "idla/site.hpp"

namespace idla::harmonic {

// a recorded shell count: walks from eta whose first hit of the shell of z
// lands in `region` and that then visit z before leaving B(0, |z| + depth)
struct HarmonicCount {
  Site z;
  std::vector<Site> region;
  double depth = 0;           // +infinity allowed when d >= 3 (truncated)
  std::int64_t count = 0;
  std::int64_t walkers = 0;   // walks launched to produce `count`
};

// Monte Carlo estimate with its binomial standard error. `bias_bound` is the
// deterministic truncation bias of any escape-radius cutoff; add it to the
// error budget on top of the statistical band.
struct Estimate {
  double value = 0;
  double se = 0;
  std::int64_t replicas = 0;
  double bias_bound = 0;
};

// paired-count report: marginal Poisson dispersion checks plus a binned
// chi-square test of independence between the two counts
struct SplitReport {
  bool degenerate = false;     // no walk ever scored; all tests skipped
  double mean1 = 0, var1 = 0, dispersion1 = 0, dispersion_p1 = 0;
  double mean2 = 0, var2 = 0, dispersion2 = 0, dispersion_p2 = 0;
  double chi2 = 0;
  std::int64_t chi2_df = 0;
  double independence_p = 0;
  bool independence_tested = false;  // needs spread in both margins
  std::int64_t replicas = 0;
  HarmonicCount margin1, margin2;    // totals over all replicas
};

// through-origin slope fit of -log P against a scaled abscissa
struct BoundFit {
  std::string name;
  double fitted_constant = 0;  // slope; always > 0 on return
  double lo = 0, hi = 0;       // ~95% band for the slope
  double r2 = 0;
  std::int64_t sample_size = 0;                   // replicas per grid point
  std::vector<std::pair<double, double>> points;  // (abscissa, -log P)
};

// Counts the walks from eta that hit the shell of z inside `region` and then
// visit z before exiting B(0, |z| + depth). Walk w of eta (in configuration
// order) draws from stream w of `seed`, so two calls with the same seed see
// identical trajectories: counts over disjoint regions at equal depth add up
// exactly, and enlarging eta keeps the shared prefix of walks.
// An infinite depth is truncated by an escape ball of radius
// escape_factor * (|z| + 1); the plane has no such truncation (recurrence).
std::int64_t count_Nz(const core::ParticleConfig& eta, const Site& z,
                      const std::vector<Site>& region, double depth, std::uint64_t seed,
                      double escape_factor = 100.0);

// Repeatedly draws X ~ Poisson(lambda) walkers at the origin and the coupled
// pair (N over region1 at depth1, N over region2 at depth2) from the same
// walks; regions must be disjoint. Reports per-margin dispersion indexes with
// two-sided p-values and a chi-square independence test on binned pairs.
SplitReport poisson_split_test(double lambda, const Site& z, const std::vector<Site>& region1,
                               const std::vector<Site>& region2, double depth1, double depth2,
                               std::int64_t replicas, std::uint64_t seed);

// For each lambda in the grid, estimates P(both counts zero) where the shell
// of z splits into the cap within distance R of z (probed at truncated
// infinite depth) and its complement (probed at depth R), then fits -log P
// through the origin against lambda * R / |z|^(d-1). Walkers are shared
// across the grid by Poisson superposition, so the zero events are nested and
// -log P is nondecreasing in lambda sample by sample.
BoundFit joint_zero_probe(const std::vector<double>& lambda_grid, const Site& z, double R,
                          std::int64_t replicas, std::uint64_t seed,
                          double escape_factor = 25.0);

// P_y(walk ever hits z), estimated with escape declared at radius
// escape_factor * |y - z| around z; truncation bias <= escape_factor^-(d-2).
// Transient dimensions only.
Estimate hit_prob_far(const Site& y, const Site& z, double escape_factor, std::int64_t replicas,
                      std::uint64_t seed);

// P_y(walk hits z before leaving B(0, |z| + depth)); exact event, no cutoff
Estimate hit_before_exit(const Site& y, const Site& z, double depth, std::int64_t replicas,
                         std::uint64_t seed);

}  // namespace idla::harmonic
