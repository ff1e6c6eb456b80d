#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

#include "idla/site.hpp"

namespace idla::core {

// A finite particle configuration eta: site -> positive count. Iteration is
// lexicographic in the site, and launch order within a site is consecutive,
// so every consumer sees one canonical order.
class ParticleConfig {
 public:
  ParticleConfig() = default;

  static ParticleConfig at_origin(int dim, std::int64_t n) {
    ParticleConfig c;
    if (n > 0) c.add(Site::origin(dim), n);
    return c;
  }

  void add(const Site& s, std::int64_t k = 1) {
    if (k <= 0) throw std::invalid_argument("ParticleConfig: counts must be positive");
    if (!counts_.empty() && counts_.begin()->first.dim() != s.dim())
      throw std::invalid_argument("ParticleConfig: mixed dimensions");
    counts_[s] += k;
    total_ += k;
  }

  std::int64_t total() const { return total_; }
  bool empty() const { return counts_.empty(); }
  std::size_t distinct_sites() const { return counts_.size(); }
  std::int64_t count_at(const Site& s) const {
    auto it = counts_.find(s);
    return it == counts_.end() ? 0 : it->second;
  }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  friend bool operator==(const ParticleConfig& a, const ParticleConfig& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::map<Site, std::int64_t> counts_;
  std::int64_t total_ = 0;
};

}  // namespace idla::core
