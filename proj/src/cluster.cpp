#include "idla/cluster.hpp"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "idla/geometry.hpp"

namespace idla::core {

namespace {

// keep the dense grid under ~256 MB regardless of dimension
std::int32_t clamp_half(int dim, std::int32_t half) {
  if (half < 2) half = 2;
  while (half > 2) {
    double cells = 1;
    for (int i = 0; i < dim; ++i) cells *= 2.0 * half + 1;
    if (cells <= double(1u << 28)) break;
    half /= 2;
  }
  return half;
}

}  // namespace

Cluster::Cluster(int dim, std::int32_t radius_hint) : dim_(dim) {
  if (dim < 2 || dim > Site::kMaxDim) throw std::invalid_argument("Cluster: bad dimension");
  half_ = clamp_half(dim, radius_hint);
  side_ = 2u * half_ + 1u;
  std::size_t cells = 1;
  for (int i = 0; i < dim_; ++i) cells *= side_;
  grid_.assign(cells, 0);
}

Cluster Cluster::from_sites(int dim, std::int32_t radius_hint, const std::vector<Site>& sites) {
  Cluster c(dim, radius_hint);
  for (const Site& s : sites) c.insert(s);
  c.initial_size_ = c.size_;
  return c;
}

void Cluster::insert(const Site& s) {
  if (s.dim() != dim_) throw std::invalid_argument("Cluster::insert: dimension mismatch");
  std::size_t idx = 0;
  bool in_box = true;
  for (int i = 0; i < dim_; ++i) {
    std::uint32_t v = static_cast<std::uint32_t>(s[i] + half_);
    if (v >= side_) {
      in_box = false;
      break;
    }
    idx = idx * side_ + v;
  }
  if (in_box) {
    if (grid_[idx]) throw std::logic_error("Cluster::insert: site already occupied");
    grid_[idx] = 1;
  } else {
    if (!overflow_.insert(s).second)
      throw std::logic_error("Cluster::insert: site already occupied");
  }
  ++size_;
  std::int64_t n2 = s.norm2();
  if (n2 > max_norm2_) max_norm2_ = n2;
  if (min_valid_ && s == min_site_) min_valid_ = false;
}

const Site& Cluster::min_unoccupied() const {
  if (min_valid_) return min_site_;
  // Scan the box that must contain the minimum: some site of norm
  // <= sqrt(max_norm2)+1 is unoccupied (any outer-boundary site qualifies).
  std::int64_t R = geom::isqrt64(std::max<std::int64_t>(max_norm2_, 0)) + 1;
  std::array<std::int32_t, Site::kMaxDim> c{};
  for (int i = 0; i < dim_; ++i) c[i] = static_cast<std::int32_t>(-R);
  std::int64_t best = -1;
  while (true) {
    std::int64_t n2 = 0;
    for (int i = 0; i < dim_; ++i) n2 += std::int64_t(c[i]) * c[i];
    if (n2 <= R * R && (best < 0 || n2 < best) && !contains_raw(c.data())) {
      best = n2;  // lexicographic scan: first hit at a norm is the lex-least
      min_site_ = Site(c.data(), dim_);
    }
    int i = dim_ - 1;
    while (i >= 0 && c[i] == R) c[i--] = static_cast<std::int32_t>(-R);
    if (i < 0) break;
    ++c[i];
  }
  if (best < 0) throw std::logic_error("Cluster::min_unoccupied: scan found nothing");
  min_valid_ = true;
  return min_site_;
}

std::vector<Site> Cluster::sites() const {
  std::vector<Site> out;
  out.reserve(static_cast<std::size_t>(size_));
  std::array<std::int32_t, Site::kMaxDim> c{};
  for (std::size_t idx = 0; idx < grid_.size(); ++idx) {
    if (!grid_[idx]) continue;
    std::size_t rem = idx;
    for (int i = dim_ - 1; i >= 0; --i) {
      c[i] = static_cast<std::int32_t>(rem % side_) - half_;
      rem /= side_;
    }
    out.emplace_back(c.data(), dim_);
  }
  out.insert(out.end(), overflow_.begin(), overflow_.end());
  std::sort(out.begin(), out.end());
  return out;
}

void Cluster::write_snapshot(std::ostream& os, std::uint64_t seed) const {
  char head[96];
  std::snprintf(head, sizeof head, "# idla d=%d particles=%" PRId64 " seed=%" PRIu64 "\n", dim_,
                particle_count(), seed);
  os << head;
  for (const Site& s : sites()) os << s << '\n';
}

Snapshot Cluster::read_snapshot(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("snapshot: empty input");
  int dim = 0;
  std::int64_t particles = 0;
  std::uint64_t seed = 0;
  if (std::sscanf(line.c_str(), "# idla d=%d particles=%" SCNd64 " seed=%" SCNu64, &dim,
                  &particles, &seed) != 3)
    throw std::invalid_argument("snapshot: malformed header: " + line);
  if (dim < 2 || dim > Site::kMaxDim) throw std::invalid_argument("snapshot: bad dimension");

  std::vector<Site> sites;
  std::int32_t maxabs = 2;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::array<std::int32_t, Site::kMaxDim> c{};
    for (int i = 0; i < dim; ++i)
      if (!(ls >> c[i])) throw std::invalid_argument("snapshot: malformed site line: " + line);
    std::int32_t trailing;
    if (ls >> trailing) throw std::invalid_argument("snapshot: too many coordinates: " + line);
    for (int i = 0; i < dim; ++i) maxabs = std::max(maxabs, std::abs(c[i]));
    sites.emplace_back(c.data(), dim);
  }
  if (particles < 0 || particles > static_cast<std::int64_t>(sites.size()))
    throw std::invalid_argument("snapshot: particle count out of range");

  Cluster cluster(dim, maxabs + 2);
  for (const Site& s : sites) cluster.insert(s);
  cluster.initial_size_ = cluster.size_ - particles;
  return Snapshot{std::move(cluster), seed};
}

}  // namespace idla::core
