#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_set>
#include <vector>

#include "idla/site.hpp"

namespace idla::core {

struct Snapshot;

// The aggregate: a set of occupied sites. Occupancy lives in a dense byte
// grid over a centered box (walks test membership every step), with a hash
// set catching the rare site outside the box, so correctness never depends
// on the size hint. Sites are only ever added.
class Cluster {
 public:
  // `radius_hint` sizes the box; it is clamped so the grid stays within a
  // sane memory budget (the overflow set covers anything beyond).
  Cluster(int dim, std::int32_t radius_hint);

  static Cluster from_sites(int dim, std::int32_t radius_hint, const std::vector<Site>& sites);

  int dim() const { return dim_; }
  std::int64_t occupied_count() const { return size_; }
  // particles added since construction (snapshots carry this through)
  std::int64_t particle_count() const { return size_ - initial_size_; }

  bool contains(const Site& s) const { return contains_raw(s.data()); }

  bool contains_raw(const std::int32_t* c) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) {
      std::uint32_t v = static_cast<std::uint32_t>(c[i] + half_);
      if (v >= side_) return overflow_contains(c);
      idx = idx * side_ + v;
    }
    return grid_[idx] != 0;
  }

  // site must be unoccupied (growth only adds fresh sites)
  void insert(const Site& s);

  std::int64_t max_norm2() const { return max_norm2_; }  // -1 when empty

  // The unoccupied site of minimal norm, ties broken lexicographically.
  // Cached; growth only invalidates it by occupying the cached site (the
  // minimum can never decrease), so recomputation is a lazy frontier scan.
  const Site& min_unoccupied() const;
  std::int64_t min_unoccupied_norm2() const { return min_unoccupied().norm2(); }

  // all occupied sites, lexicographically sorted
  std::vector<Site> sites() const;

  // --- snapshot text format ---------------------------------------------
  // header  "# idla d=<dim> particles=<count> seed=<seed>"
  // body    one site per line, coordinates space-separated, sorted
  void write_snapshot(std::ostream& os, std::uint64_t seed) const;
  static Snapshot read_snapshot(std::istream& is);

 private:
  bool overflow_contains(const std::int32_t* c) const {
    if (overflow_.empty()) return false;
    return overflow_.count(Site(c, dim_)) != 0;
  }

  int dim_;
  std::int32_t half_;
  std::uint32_t side_;
  std::vector<std::uint8_t> grid_;
  std::unordered_set<Site, SiteHash> overflow_;
  std::int64_t size_ = 0;
  std::int64_t initial_size_ = 0;
  std::int64_t max_norm2_ = -1;
  mutable bool min_valid_ = false;
  mutable Site min_site_;
};

struct Snapshot {
  Cluster cluster;
  std::uint64_t seed;
};

}  // namespace idla::core
