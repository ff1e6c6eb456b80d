#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "idla/cluster.hpp"
#include "idla/errors.hpp"
#include "idla/geometry.hpp"
#include "idla/particle_config.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"
#include "idla/walk.hpp"

// Aggregation dynamics. An explorer walks until it stands on an unoccupied
// site; that site is then occupied. Randomness comes from one of two sources:
//
//  - FreeSource: the walker's own RngStream (independent walks; statistics)
//  - PackSource: shared InstructionStacks (site-indexed; scheduling-invariant
//    builds and exact abelian replays)
//
// Both expose next_direction_raw(coords, dim); the stream source never
// materialises a Site on the hot path.
namespace idla::core {

struct FreeSource {
  walk::RngStream* rng;
  std::uint32_t two_d;
  std::uint32_t next_direction_raw(const std::int32_t*, int) { return walk::bounded(rng->next(), two_d); }
};

struct PackSource {
  walk::InstructionStacks* stacks;
  std::uint32_t next_direction_raw(const std::int32_t* c, int dim) {
    return stacks->pop(Site(c, dim));
  }
};

inline FreeSource source_of(walk::RngStream& rng, int dim) {
  return FreeSource{&rng, static_cast<std::uint32_t>(2 * dim)};
}
inline PackSource source_of(walk::InstructionStacks& st) { return PackSource{&st}; }

// Free continuation of a trajectory past its settling point: the stream
// source just keeps drawing; the stack source reads ahead of the pop cursors
// without consuming (later explorers still see those entries).
inline FreeSource free_continuation(const FreeSource& s) { return s; }

struct PeekSource {
  walk::StackPeeker peeker;
  std::uint32_t next_direction_raw(const std::int32_t* c, int dim) {
    return peeker.next_direction(Site(c, dim));
  }
};
inline PeekSource free_continuation(const PackSource& s) {
  return PeekSource{walk::StackPeeker(*s.stacks)};
}

// walk budget for dynamics confined to the cluster plus a ball of radius R
inline std::uint64_t growth_budget(const Cluster& cl, double extra_radius, double factor) {
  double r = static_cast<double>(geom::isqrt64(std::max<std::int64_t>(cl.max_norm2(), 0)) + 2);
  if (extra_radius + 2 > r) r = extra_radius + 2;
  return walk::step_budget(2 * r, factor);
}

// Walk from `start` to the first unoccupied site. The caller occupies it.
template <class Source>
Site settle(const Cluster& cl, const Site& start, Source&& src, std::uint64_t budget) {
  std::array<std::int32_t, Site::kMaxDim> c{};
  const int dim = cl.dim();
  if (start.dim() != dim) throw std::invalid_argument("settle: dimension mismatch");
  for (int i = 0; i < dim; ++i) c[i] = start[i];
  std::uint64_t steps = 0;
  while (cl.contains_raw(c.data())) {
    if (steps >= budget) throw BudgetExceeded("settle: step budget exhausted", steps);
    std::uint32_t d = src.next_direction_raw(c.data(), dim);
    c[d >> 1] += (d & 1) ? 1 : -1;
    ++steps;
  }
  return Site(c.data(), dim);
}

// Launch explorers one by one in an explicit order.
template <class Source>
void grow_in_order(Cluster& cl, const std::vector<Site>& starts, Source&& src,
                   double budget_factor = 1e4) {
  for (const Site& s : starts) {
    double r0 = std::sqrt(static_cast<double>(s.norm2()));
    Site rest = settle(cl, s, src, growth_budget(cl, r0, budget_factor));
    cl.insert(rest);
  }
}

// Canonical order: lexicographic in the start site, repeats consecutive.
template <class Source>
void grow_sequential(Cluster& cl, const ParticleConfig& starts, Source&& src,
                     double budget_factor = 1e4) {
  for (const auto& [site, count] : starts) {
    double r0 = std::sqrt(static_cast<double>(site.norm2()));
    for (std::int64_t i = 0; i < count; ++i) {
      Site rest = settle(cl, site, src, growth_budget(cl, r0, budget_factor));
      cl.insert(rest);
    }
  }
}

struct WaveOptions {
  bool track_visits = false;  // W_R bookkeeping (per-explorer deduped)
  bool track_free = false;    // M_R bookkeeping for the coupled free walks
  double budget_factor = 1e4;
};

struct WaveOutcome {
  ParticleConfig stopped;              // zeta: explorers paused at their first site outside B(0,R)
  std::vector<Site> settled;           // sites occupied during the wave, in settle order
  std::map<Site, std::int64_t> visits;      // W_R(z): explorers at z before exit (or at exit, z outside)
  std::map<Site, std::int64_t> free_exits;  // M_R(z): same field for the coupled free walks
  std::int64_t launched = 0;
};

// One wave: explorers either settle strictly inside B(0,R) or pause at their
// first site with norm >= R. Under the natural coupling each explorer's
// trajectory is a prefix of its free walk, so visits(z) <= free_exits(z)
// pointwise, sample by sample.
template <class Source>
WaveOutcome wave_run(Cluster& cl, const ParticleConfig& starts, double R, Source&& src,
                     const WaveOptions& opt = {}) {
  const int dim = cl.dim();
  if (R < 0) throw std::invalid_argument("wave_run: R must be >= 0");
  const std::int64_t q = geom::ball_norm2_bound(R);

  WaveOutcome out;
  out.launched = starts.total();

  std::unordered_map<Site, std::int64_t, SiteHash> stamp_v, stamp_f;
  std::int64_t walk_id = 0;
  auto mark = [](std::unordered_map<Site, std::int64_t, SiteHash>& stamp,
                 std::map<Site, std::int64_t>& tally, const Site& s, std::int64_t id) {
    auto [it, fresh] = stamp.try_emplace(s, id);
    if (fresh || it->second != id) {
      it->second = id;
      ++tally[s];
    }
  };

  for (const auto& [site, count] : starts) {
    if (site.dim() != dim) throw std::invalid_argument("wave_run: dimension mismatch");
    for (std::int64_t rep = 0; rep < count; ++rep) {
      ++walk_id;
      const std::uint64_t budget = growth_budget(cl, R, opt.budget_factor);
      std::array<std::int32_t, Site::kMaxDim> c{};
      for (int i = 0; i < dim; ++i) c[i] = site[i];
      std::int64_t n2 = site.norm2();
      std::uint64_t steps = 0;
      while (true) {
        if (n2 > q) {  // first site on/after exiting B(0,R): pause here
          Site here(c.data(), dim);
          out.stopped.add(here);
          if (opt.track_visits) mark(stamp_v, out.visits, here, walk_id);
          if (opt.track_free) mark(stamp_f, out.free_exits, here, walk_id);
          break;
        }
        if (opt.track_visits) mark(stamp_v, out.visits, Site(c.data(), dim), walk_id);
        if (opt.track_free) mark(stamp_f, out.free_exits, Site(c.data(), dim), walk_id);
        if (!cl.contains_raw(c.data())) {  // settles here
          Site here(c.data(), dim);
          cl.insert(here);
          out.settled.push_back(here);
          if (opt.track_free) {  // free walk keeps going until it leaves the ball
            auto cont = free_continuation(src);
            while (n2 <= q) {
              if (steps >= budget)
                throw BudgetExceeded("wave_run: free continuation budget exhausted", steps);
              std::uint32_t d = cont.next_direction_raw(c.data(), dim);
              int a = d >> 1, delta = (d & 1) ? 1 : -1;
              n2 += 2 * std::int64_t(delta) * c[a] + 1;
              c[a] += delta;
              ++steps;
              mark(stamp_f, out.free_exits, Site(c.data(), dim), walk_id);
            }
          }
          break;
        }
        if (steps >= budget) throw BudgetExceeded("wave_run: step budget exhausted", steps);
        std::uint32_t d = src.next_direction_raw(c.data(), dim);
        int a = d >> 1, delta = (d & 1) ? 1 : -1;
        n2 += 2 * std::int64_t(delta) * c[a] + 1;
        c[a] += delta;
        ++steps;
      }
    }
  }
  return out;
}

// grid size for a cluster expected to hold `particles` sites (plus margin)
std::int32_t radius_hint(int dim, std::int64_t particles, double extra_radius = 0);

// Wave 1: n explorers from the origin. Wave 2: m explorers from the origin,
// paused on the outer boundary of B(0,R). Wave 3: release them. With stacks,
// the result equals the one-shot (n+m)-explorer build, set-exactly.
template <class Source>
Cluster three_wave_build(int dim, std::int64_t n, std::int64_t m, double R, Source&& src,
                         double budget_factor = 1e4) {
  if (n < 0 || m < 0) throw std::invalid_argument("three_wave_build: negative particle count");
  Cluster cl(dim, radius_hint(dim, n + m, R));
  grow_sequential(cl, ParticleConfig::at_origin(dim, n), src, budget_factor);
  WaveOptions wo;
  wo.budget_factor = budget_factor;
  auto wave = wave_run(cl, ParticleConfig::at_origin(dim, m), R, src, wo);
  grow_sequential(cl, wave.stopped, src, budget_factor);
  return cl;
}

}  // namespace idla::core
