#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>

namespace idla {

// A lattice site in Z^d, 2 <= d <= kMaxDim. Plain value type; comparison is
// coordinate-wise lexicographic, which is the tie-break order used whenever a
// deterministic choice among equal-norm sites is needed.
class Site {
 public:
  static constexpr int kMaxDim = 8;

  Site() = default;  // dim 0: invalid sentinel, only for containers

  Site(std::initializer_list<std::int32_t> cs) : dim_(static_cast<int>(cs.size())) {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("Site: bad dimension");
    int i = 0;
    for (auto c : cs) c_[i++] = c;
  }

  Site(const std::int32_t* cs, int dim) : dim_(dim) {
    if (dim_ < 1 || dim_ > kMaxDim) throw std::invalid_argument("Site: bad dimension");
    for (int i = 0; i < dim_; ++i) c_[i] = cs[i];
  }

  static Site origin(int dim) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Site: bad dimension");
    Site s;
    s.dim_ = dim;
    return s;
  }

  // value * e_axis
  static Site axis(int dim, int axis, std::int32_t value) {
    Site s = origin(dim);
    if (axis < 0 || axis >= dim) throw std::invalid_argument("Site: bad axis");
    s.c_[axis] = value;
    return s;
  }

  int dim() const { return dim_; }
  std::int32_t operator[](int i) const { return c_[i]; }
  std::int32_t& operator[](int i) { return c_[i]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }
  const std::int32_t* data() const { return c_.data(); }

  std::int64_t norm2() const {
    std::int64_t s = 0;
    for (int i = 0; i < dim_; ++i) s += std::int64_t(c_[i]) * c_[i];
    return s;
  }

  // direction in [0, 2*dim): axis = direction >> 1, sign = +1 if odd else -1
  Site neighbor(int direction) const {
    Site s = *this;
    s.c_[direction >> 1] += (direction & 1) ? 1 : -1;
    return s;
  }

  friend bool operator==(const Site& a, const Site& b) {
    return a.dim_ == b.dim_ && a.c_ == b.c_;  // padding is zeroed
  }

  friend bool operator<(const Site& a, const Site& b) {
    if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    return false;
  }

  friend std::ostream& operator<<(std::ostream& os, const Site& s) {
    for (int i = 0; i < s.dim_; ++i) {
      if (i) os << ' ';
      os << s.c_[i];
    }
    return os;
  }

 private:
  std::array<std::int32_t, kMaxDim> c_{};
  int dim_ = 0;
};

inline std::int64_t norm2_diff(const Site& a, const Site& b) {
  std::int64_t s = 0;
  for (int i = 0; i < a.dim(); ++i) {
    std::int64_t d = std::int64_t(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

struct SiteHash {
  std::size_t operator()(const Site& s) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ (std::uint64_t(s.dim()) << 56);
    for (int i = 0; i < s.dim(); ++i) {
      h ^= std::uint64_t(std::uint32_t(s[i])) + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
      h *= 0xFF51AFD7ED558CCDull;
      h ^= h >> 33;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace idla
