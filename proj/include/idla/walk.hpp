#pragma once

#include <cstdint>

#include "idla/errors.hpp"
#include "idla/rng.hpp"
#include "idla/site.hpp"

// Nearest-neighbour walks on Z^d driven by either randomness source:
//  - StreamSource: one RngStream per walker (free mode; statistics)
//  - StackSource:  shared site-indexed stacks (stack mode; abelian replays)
// A direction d in [0, 2*dim) moves axis d>>1 by +1 if (d&1) else -1.
namespace idla::walk {

struct StreamSource {
  RngStream* rng;
  std::uint32_t two_d;
  std::uint32_t next_direction(const Site&) { return bounded(rng->next(), two_d); }
};

struct StackSource {
  InstructionStacks* stacks;
  std::uint32_t next_direction(const Site& s) { return stacks->pop(s); }
};

struct WalkState {
  Site position;
  std::uint64_t steps = 0;
};

// Step budget for a walk confined to a region of the given diameter.
inline std::uint64_t step_budget(double diameter, double factor = 1e4) {
  double b = factor * diameter * diameter;
  if (b < 1024) b = 1024;
  if (b > 9e18) b = 9e18;
  return static_cast<std::uint64_t>(b);
}

// Walk from `start` until the first site outside `region` (a predicate on
// Site). A start outside the region exits immediately with zero steps.
template <class Region, class Source>
WalkState run_until_exit(const Site& start, Region&& region, Source&& src, std::uint64_t budget) {
  WalkState w{start, 0};
  while (region(w.position)) {
    if (w.steps >= budget)
      throw BudgetExceeded("run_until_exit: step budget exhausted", w.steps);
    w.position = w.position.neighbor(static_cast<int>(src.next_direction(w.position)));
    ++w.steps;
  }
  return w;
}

struct HitResult {
  bool hit = false;
  Site end;
  std::uint64_t steps = 0;
};

// Walk from `start` until it reaches `target` strictly before leaving
// `escape_region`. Leaving and hitting at the same instant counts as leaving;
// the one exception is start == target, an immediate hit by convention
// (H(target) = 0).
template <class Region, class Source>
HitResult run_until_hit_or_exit(const Site& start, const Site& target, Region&& escape_region,
                                Source&& src, std::uint64_t budget) {
  HitResult r{false, start, 0};
  if (start == target) {
    r.hit = true;
    return r;
  }
  while (true) {
    if (!escape_region(r.end)) return r;
    if (r.end == target) {
      r.hit = true;
      return r;
    }
    if (r.steps >= budget)
      throw BudgetExceeded("run_until_hit_or_exit: step budget exhausted", r.steps);
    r.end = r.end.neighbor(static_cast<int>(src.next_direction(r.end)));
    ++r.steps;
  }
}

}  // namespace idla::walk
