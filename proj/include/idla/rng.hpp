#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <unordered_map>

#include "idla/site.hpp"

// Counter-based randomness. Every draw is a pure function of
// (seed, stream, counter), so streams can be replayed, rewound, or read out
// of order; that is what couples an explorer to "the same walk, continued".
namespace idla::walk {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Stafford mix 13): bijective avalanche on 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

inline std::uint64_t fold(std::uint64_t h, std::uint64_t v) { return mix64(h ^ (v + kGolden)); }

// Deterministic stream id from structured parts (replica, wave, walker, ...).
inline std::uint64_t substream(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243F6A8885A308D3ull;  // arbitrary nonzero start
  for (auto p : parts) h = fold(h, p);
  return h;
}

// Map a uniform 64-bit draw to [0, n). The bias is at most n / 2^64, far
// below anything the statistical checks can see (and zero when n divides
// 2^64, e.g. the four directions of Z^2).
inline std::uint32_t bounded(std::uint64_t u, std::uint32_t n) {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(u) * n) >> 64);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : base_(fold(fold(0x452821E638D01377ull, seed), stream)) {}

  // draw k of this stream, independent of the cursor
  std::uint64_t draw(std::uint64_t k) const { return mix64(base_ + k * kGolden); }

  std::uint64_t next() { return draw(counter_++); }
  std::uint32_t next_below(std::uint32_t n) { return bounded(next(), n); }
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

  // UniformRandomBitGenerator, for std distributions
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// X ~ Poisson(lambda). Consumes a variable number of draws from the stream.
inline std::int64_t poisson_sample(double lambda, RngStream& rng) {
  if (!(lambda >= 0)) throw std::invalid_argument("poisson_sample: lambda must be >= 0");
  if (lambda == 0) return 0;
  std::poisson_distribution<std::int64_t> dist(lambda);
  return dist(rng);
}

// Site-indexed instruction stacks (the Diaconis-Fulton presentation): stack
// entry k at site x is a fixed direction, generated lazily from the key
// (seed, x, k). Only the pop cursors are stored, so memory is O(visited
// sites). Not safe for concurrent pops; each growth run owns its stacks.
class InstructionStacks {
 public:
  InstructionStacks(std::uint64_t seed, int dim) : seed_(seed), two_d_(2 * dim), dim_(dim) {
    if (dim < 2 || dim > Site::kMaxDim) throw std::invalid_argument("InstructionStacks: bad dim");
  }

  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  std::uint64_t site_key(const Site& s) const {
    std::uint64_t h = fold(0x13198A2E03707344ull, seed_);
    for (int i = 0; i < s.dim(); ++i) h = fold(h, static_cast<std::uint32_t>(s[i]));
    return h;
  }

  // stack entry k at s, without consuming anything
  std::uint32_t direction_at(const Site& s, std::uint64_t k) const {
    return bounded(mix64(site_key(s) + k * kGolden), two_d_);
  }

  // consume the next unused entry at s
  std::uint32_t pop(const Site& s) {
    auto [it, fresh] = cursors_.try_emplace(s, Cursor{0, 0});
    if (fresh) it->second.key = site_key(s);
    return bounded(mix64(it->second.key + (it->second.next++) * kGolden), two_d_);
  }

  std::uint64_t popped(const Site& s) const {
    auto it = cursors_.find(s);
    return it == cursors_.end() ? 0 : it->second.next;
  }

  std::size_t touched_sites() const { return cursors_.size(); }

 private:
  struct Cursor {
    std::uint64_t next;
    std::uint64_t key;
  };
  std::uint64_t seed_;
  std::uint32_t two_d_;
  int dim_;
  std::unordered_map<Site, Cursor, SiteHash> cursors_;
};

// Reads stack entries past the committed cursors without consuming them.
// Used for the free-walk continuation of a settled explorer: the comparison
// walk keeps the trajectory while leaving the stacks untouched for later
// explorers.
class StackPeeker {
 public:
  explicit StackPeeker(const InstructionStacks& st) : st_(&st) {}
  std::uint32_t next_direction(const Site& s) {
    std::uint64_t k = st_->popped(s) + ahead_[s]++;
    return st_->direction_at(s, k);
  }

 private:
  const InstructionStacks* st_;
  std::unordered_map<Site, std::uint64_t, SiteHash> ahead_;
};

}  // namespace idla::walk
