#include "idla/harmonic.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "idla/errors.hpp"
#include "idla/geometry.hpp"
#include "idla/rng.hpp"
#include "idla/walk.hpp"

namespace idla::harmonic {

namespace {

using SiteSet = std::unordered_set<Site, SiteHash>;

// raw-coordinate walker tracking |pos|^2 and |pos - z|^2 incrementally
struct Walker {
  std::int32_t c[Site::kMaxDim];
  std::int64_t n2;
  std::int64_t m2;
  const std::int32_t* zc;
  int dim;

  Walker(const Site& start, const Site& z) : zc(z.data()), dim(z.dim()) {
    n2 = start.norm2();
    m2 = norm2_diff(start, z);
    for (int i = 0; i < dim; ++i) c[i] = start[i];
  }

  void step(int dir) {
    int a = dir >> 1;
    std::int64_t delta = (dir & 1) ? 1 : -1;
    n2 += 2 * delta * c[a] + 1;
    m2 += 2 * delta * (c[a] - zc[a]) + 1;
    c[a] += static_cast<std::int32_t>(delta);
  }
};

[[noreturn]] void budget_throw(const char* where, std::uint64_t steps) {
  throw BudgetExceeded(std::string(where) + ": walk exceeded its step budget", steps);
}

// walks one explorer; true when it scores: first shell hit in `region`, then
// z visited before the norm^2 leaves q_out
bool score_one(walk::RngStream& rng, const Site& start, const Site& z, const SiteSet& region,
               std::int64_t q_shell, std::int64_t q_out, std::uint64_t budget) {
  const std::uint32_t two_d = static_cast<std::uint32_t>(2 * z.dim());
  Walker w(start, z);
  std::uint64_t steps = 0;
  while (w.n2 <= q_shell) {
    w.step(static_cast<int>(rng.next_below(two_d)));
    if (++steps > budget) budget_throw("count_Nz", steps);
  }
  if (!region.count(Site(w.c, w.dim))) return false;
  for (;;) {
    if (w.m2 == 0) return true;
    if (w.n2 > q_out) return false;
    w.step(static_cast<int>(rng.next_below(two_d)));
    if (++steps > budget) budget_throw("count_Nz", steps);
  }
}

struct CountSetup {
  SiteSet region;
  std::int64_t q_shell;
  std::int64_t q_out;
  std::uint64_t budget;
};

CountSetup prepare_count(const Site& z, const std::vector<Site>& region, double depth,
                         double escape_factor) {
  auto shell = geom::sphere_shell(z);  // rejects z = 0
  SiteSet on_shell(shell.begin(), shell.end());
  for (const Site& s : region)
    if (s.dim() != z.dim() || !on_shell.count(s))
      throw std::invalid_argument("count_Nz: region must lie on the shell of z");

  const bool infinite = std::isinf(depth);
  if (!infinite && !(depth > 0)) throw std::invalid_argument("count_Nz: depth must be positive");
  if (infinite && z.dim() == 2)
    throw std::domain_error(
        "count_Nz: infinite depth is meaningless in the plane (recurrent walk); use a finite depth");
  if (infinite && escape_factor < 10)
    throw std::invalid_argument("count_Nz: escape_factor must be at least 10");

  const double norm_z = std::sqrt(static_cast<double>(z.norm2()));
  CountSetup setup;
  setup.region = SiteSet(region.begin(), region.end());
  setup.q_shell = z.norm2() - 1;
  setup.q_out = infinite ? geom::ball_norm2_bound(escape_factor * (norm_z + 1.0))
                         : geom::ball_norm2_bound(norm_z + depth);
  setup.budget = walk::step_budget(2.0 * (std::sqrt(static_cast<double>(setup.q_out)) + 2.0));
  return setup;
}

std::int64_t count_with(const core::ParticleConfig& eta, const Site& z, const CountSetup& setup,
                        std::uint64_t seed) {
  if (setup.region.empty()) return 0;
  std::int64_t count = 0;
  std::uint64_t widx = 0;
  for (const auto& [start, k] : eta) {
    if (start.dim() != z.dim()) throw std::invalid_argument("count_Nz: mixed dimensions");
    for (std::int64_t i = 0; i < k; ++i) {
      walk::RngStream rng(seed, widx++);
      if (score_one(rng, start, z, setup.region, setup.q_shell, setup.q_out, setup.budget))
        ++count;
    }
  }
  return count;
}

double chi2_upper_p(double stat, double df) {
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double dispersion_p_value(double stat, double df) {
  boost::math::chi_squared_distribution<double> dist(df);
  double lower = boost::math::cdf(dist, stat);
  return std::min(1.0, 2.0 * std::min(lower, 1.0 - lower));
}

// greedy marginal bins holding at least ceil(sqrt(5n)) observations each, so
// every contingency cell expects >= 5 under independence
std::vector<std::int64_t> bin_edges(const std::vector<std::int64_t>& values) {
  std::map<std::int64_t, std::int64_t> freq;
  for (std::int64_t v : values) ++freq[v];
  const double need = std::ceil(std::sqrt(5.0 * static_cast<double>(values.size())));
  std::vector<std::int64_t> edges;  // bin j = values in (edges[j-1], edges[j]]
  std::int64_t acc = 0;
  for (const auto& [v, c] : freq) {
    acc += c;
    if (static_cast<double>(acc) >= need) {
      edges.push_back(v);
      acc = 0;
    }
  }
  if (acc > 0 && !edges.empty()) edges.back() = freq.rbegin()->first;
  else if (acc > 0) edges.push_back(freq.rbegin()->first);
  return edges;
}

std::size_t bin_of(std::int64_t v, const std::vector<std::int64_t>& edges) {
  return std::upper_bound(edges.begin(), edges.end(), v - 1) - edges.begin();
}

}  // namespace

std::int64_t count_Nz(const core::ParticleConfig& eta, const Site& z,
                      const std::vector<Site>& region, double depth, std::uint64_t seed,
                      double escape_factor) {
  auto setup = prepare_count(z, region, depth, escape_factor);
  if (setup.region.empty() || eta.total() == 0) return 0;
  return count_with(eta, z, setup, seed);
}

SplitReport poisson_split_test(double lambda, const Site& z, const std::vector<Site>& region1,
                               const std::vector<Site>& region2, double depth1, double depth2,
                               std::int64_t replicas, std::uint64_t seed) {
  if (!(lambda >= 0)) throw std::invalid_argument("poisson_split_test: lambda must be >= 0");
  if (replicas < 2) throw std::invalid_argument("poisson_split_test: need at least 2 replicas");
  SiteSet first(region1.begin(), region1.end());
  for (const Site& s : region2)
    if (first.count(s)) throw std::invalid_argument("poisson_split_test: regions must be disjoint");
  auto setup1 = prepare_count(z, region1, depth1, 100.0);
  auto setup2 = prepare_count(z, region2, depth2, 100.0);

  std::vector<std::int64_t> n1(replicas), n2(replicas);
  std::int64_t walkers = 0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    walk::RngStream xdraw(walk::substream({seed, static_cast<std::uint64_t>(rep)}), 0);
    std::int64_t x = walk::poisson_sample(lambda, xdraw);
    walkers += x;
    auto eta = core::ParticleConfig::at_origin(z.dim(), x);
    std::uint64_t wseed = walk::substream({seed, static_cast<std::uint64_t>(rep), 1});
    n1[rep] = x == 0 ? 0 : count_with(eta, z, setup1, wseed);
    n2[rep] = x == 0 ? 0 : count_with(eta, z, setup2, wseed);
  }

  SplitReport rep;
  rep.replicas = replicas;
  rep.margin1 = {z, region1, depth1, 0, walkers};
  rep.margin2 = {z, region2, depth2, 0, walkers};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto moments = [&](const std::vector<std::int64_t>& v, double& mean, double& var) {
    double m = 0;
    for (std::int64_t x : v) m += static_cast<double>(x);
    m /= static_cast<double>(replicas);
    double s = 0;
    for (std::int64_t x : v) s += (static_cast<double>(x) - m) * (static_cast<double>(x) - m);
    mean = m;
    var = s / static_cast<double>(replicas - 1);
  };
  moments(n1, rep.mean1, rep.var1);
  moments(n2, rep.mean2, rep.var2);
  for (std::int64_t x : n1) rep.margin1.count += x;
  for (std::int64_t x : n2) rep.margin2.count += x;

  if (rep.margin1.count + rep.margin2.count == 0) {
    rep.degenerate = true;
    rep.dispersion1 = rep.dispersion2 = rep.dispersion_p1 = rep.dispersion_p2 = nan;
    rep.independence_p = nan;
    return rep;
  }

  const double df = static_cast<double>(replicas - 1);
  auto dispersion = [&](double mean, double var, double& index, double& p) {
    if (mean == 0) {
      index = p = nan;
      return;
    }
    index = var / mean;
    p = dispersion_p_value(df * index, df);
  };
  dispersion(rep.mean1, rep.var1, rep.dispersion1, rep.dispersion_p1);
  dispersion(rep.mean2, rep.var2, rep.dispersion2, rep.dispersion_p2);

  auto e1 = bin_edges(n1);
  auto e2 = bin_edges(n2);
  if (e1.size() >= 2 && e2.size() >= 2) {
    std::vector<std::vector<double>> table(e1.size(), std::vector<double>(e2.size(), 0));
    for (std::int64_t r = 0; r < replicas; ++r)
      table[bin_of(n1[r], e1)][bin_of(n2[r], e2)] += 1;
    std::vector<double> row(e1.size(), 0), col(e2.size(), 0);
    for (std::size_t i = 0; i < e1.size(); ++i)
      for (std::size_t j = 0; j < e2.size(); ++j) {
        row[i] += table[i][j];
        col[j] += table[i][j];
      }
    double stat = 0;
    for (std::size_t i = 0; i < e1.size(); ++i)
      for (std::size_t j = 0; j < e2.size(); ++j) {
        double expected = row[i] * col[j] / static_cast<double>(replicas);
        stat += (table[i][j] - expected) * (table[i][j] - expected) / expected;
      }
    rep.chi2 = stat;
    rep.chi2_df = static_cast<std::int64_t>((e1.size() - 1) * (e2.size() - 1));
    rep.independence_p = chi2_upper_p(stat, static_cast<double>(rep.chi2_df));
    rep.independence_tested = true;
  } else {
    rep.independence_p = nan;
  }
  return rep;
}

BoundFit joint_zero_probe(const std::vector<double>& lambda_grid, const Site& z, double R,
                          std::int64_t replicas, std::uint64_t seed, double escape_factor) {
  if (!(R > 0)) throw std::invalid_argument("joint_zero_probe: R must be positive");
  if (lambda_grid.empty()) throw std::invalid_argument("joint_zero_probe: empty lambda grid");
  for (double l : lambda_grid)
    if (!(l >= 0)) throw std::invalid_argument("joint_zero_probe: lambda must be >= 0");
  if (replicas < 2) throw std::invalid_argument("joint_zero_probe: need at least 2 replicas");

  auto split = geom::cap_and_complement(z, R);
  const double inf = std::numeric_limits<double>::infinity();
  auto cap_setup = prepare_count(z, split.cap, inf, escape_factor);
  auto far_setup = prepare_count(z, split.complement, R, escape_factor);

  // ascending grid; walkers are shared across lambdas by superposition
  std::vector<std::size_t> order(lambda_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return lambda_grid[a] < lambda_grid[b]; });

  std::vector<std::int64_t> zeros(lambda_grid.size(), 0);
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    walk::RngStream xdraw(walk::substream({seed, static_cast<std::uint64_t>(rep)}), 0);
    std::uint64_t wseed = walk::substream({seed, static_cast<std::uint64_t>(rep), 1});
    std::int64_t x = 0;
    double prev_lambda = 0;
    bool alive = true;
    for (std::size_t gi : order) {
      x += walk::poisson_sample(lambda_grid[gi] - prev_lambda, xdraw);
      prev_lambda = lambda_grid[gi];
      if (alive && x > 0) {
        auto eta = core::ParticleConfig::at_origin(z.dim(), x);
        // the far count is cheap; the truncated-infinite one only breaks ties
        alive = count_with(eta, z, far_setup, wseed) == 0 &&
                count_with(eta, z, cap_setup, wseed) == 0;
      }
      if (alive) ++zeros[gi];
    }
  }

  const double norm_z = std::sqrt(static_cast<double>(z.norm2()));
  const double scale = R / std::pow(norm_z, z.dim() - 1);
  BoundFit fit;
  fit.name = "joint-zero";
  fit.sample_size = replicas;
  bool any_zero_mass = false;
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    double p = static_cast<double>(zeros[i]) / static_cast<double>(replicas);
    if (p == 0.0) {
      throw ResolutionError(
          "joint_zero_probe: no surviving replica at lambda=" + std::to_string(lambda_grid[i]) +
          "; shrink the grid or raise replicas");
    }
    if (p < 1.0) any_zero_mass = true;
    fit.points.emplace_back(lambda_grid[i] * scale, -std::log(p));
  }
  if (!any_zero_mass)
    throw ResolutionError(
        "joint_zero_probe: every count was zero at every lambda; enlarge lambda or replicas");

  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : fit.points) {
    sxx += x * x;
    sxy += x * y;
  }
  if (sxx == 0) throw ResolutionError("joint_zero_probe: degenerate abscissa (all lambda zero)");
  fit.fitted_constant = sxy / sxx;
  double rss = 0, syy = 0;
  for (const auto& [x, y] : fit.points) {
    rss += (y - fit.fitted_constant * x) * (y - fit.fitted_constant * x);
    syy += y * y;
  }
  fit.r2 = syy == 0 ? 0.0 : 1.0 - rss / syy;
  if (fit.points.size() > 1) {
    double se = std::sqrt(rss / static_cast<double>(fit.points.size() - 1) / sxx);
    fit.lo = fit.fitted_constant - 2 * se;
    fit.hi = fit.fitted_constant + 2 * se;
  } else {
    fit.lo = fit.hi = fit.fitted_constant;
  }
  if (!(fit.fitted_constant > 0))
    throw ResolutionError("joint_zero_probe: nonpositive fitted slope; the grid cannot resolve it");
  return fit;
}

Estimate hit_prob_far(const Site& y, const Site& z, double escape_factor, std::int64_t replicas,
                      std::uint64_t seed) {
  if (y.dim() != z.dim()) throw std::invalid_argument("hit_prob_far: mixed dimensions");
  if (z.dim() == 2)
    throw std::domain_error("hit_prob_far: the planar walk hits every site; use hit_before_exit");
  if (escape_factor < 10) throw std::invalid_argument("hit_prob_far: escape_factor must be >= 10");
  if (replicas < 1) throw std::invalid_argument("hit_prob_far: replicas must be positive");

  const double bias = std::pow(escape_factor, -(z.dim() - 2));
  if (y == z) return {1.0, 0.0, replicas, 0.0};

  const double dist = std::sqrt(static_cast<double>(norm2_diff(y, z)));
  const std::int64_t q = geom::ball_norm2_bound(escape_factor * dist);
  const std::uint64_t budget = walk::step_budget(2.0 * (escape_factor * dist + 2.0));
  const std::uint32_t two_d = static_cast<std::uint32_t>(2 * z.dim());

  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    walk::RngStream rng(seed, static_cast<std::uint64_t>(rep));
    Walker w(y, z);
    std::uint64_t steps = 0;
    for (;;) {
      if (w.m2 == 0) {
        ++hits;
        break;
      }
      if (w.m2 > q) break;
      w.step(static_cast<int>(rng.next_below(two_d)));
      if (++steps > budget) budget_throw("hit_prob_far", steps);
    }
  }
  double p = static_cast<double>(hits) / static_cast<double>(replicas);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
  return {p, se, replicas, bias};
}

Estimate hit_before_exit(const Site& y, const Site& z, double depth, std::int64_t replicas,
                         std::uint64_t seed) {
  if (y.dim() != z.dim()) throw std::invalid_argument("hit_before_exit: mixed dimensions");
  if (!(depth > 0)) throw std::invalid_argument("hit_before_exit: depth must be positive");
  if (replicas < 1) throw std::invalid_argument("hit_before_exit: replicas must be positive");
  if (y == z) return {1.0, 0.0, replicas, 0.0};

  const double norm_z = std::sqrt(static_cast<double>(z.norm2()));
  const std::int64_t q_out = geom::ball_norm2_bound(norm_z + depth);
  if (y.norm2() > q_out) return {0.0, 0.0, replicas, 0.0};
  const std::uint64_t budget = walk::step_budget(2.0 * (norm_z + depth + 2.0));
  const std::uint32_t two_d = static_cast<std::uint32_t>(2 * z.dim());

  std::int64_t hits = 0;
  for (std::int64_t rep = 0; rep < replicas; ++rep) {
    walk::RngStream rng(seed, static_cast<std::uint64_t>(rep));
    Walker w(y, z);
    std::uint64_t steps = 0;
    for (;;) {
      if (w.m2 == 0) {
        ++hits;
        break;
      }
      if (w.n2 > q_out) break;
      w.step(static_cast<int>(rng.next_below(two_d)));
      if (++steps > budget) budget_throw("hit_before_exit", steps);
    }
  }
  double p = static_cast<double>(hits) / static_cast<double>(replicas);
  double se = std::sqrt(p * (1.0 - p) / static_cast<double>(replicas));
  return {p, se, replicas, 0.0};
}

}  // namespace idla::harmonic
