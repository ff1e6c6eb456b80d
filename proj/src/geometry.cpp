#include "idla/geometry.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_set>

namespace idla::geom {

namespace {

void check_dim(int dim) {
  if (dim < 2 || dim > Site::kMaxDim) throw std::invalid_argument("geom: dim must be in [2, 8]");
}

// Unit-ball volume of R^d, used only as an a-priori capacity estimate.
double unit_ball_volume(int dim) {
  return std::pow(std::acos(-1.0), dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
}

// Count of { x in Z^dim : |x|^2 <= bound }, recursing over the first
// coordinate. Cost is O(bound^{(dim-1)/2}); the innermost dimension is
// counted arithmetically.
std::int64_t count_rec(int dim, std::int64_t bound) {
  if (bound < 0) return 0;
  if (dim == 1) return 2 * isqrt64(bound) + 1;
  std::int64_t total = count_rec(dim - 1, bound);
  std::int64_t m = isqrt64(bound);
  for (std::int64_t x = 1; x <= m; ++x) {
    std::int64_t slab = count_rec(dim - 1, bound - x * x);
    if (__builtin_add_overflow(total, 2 * slab, &total))
      throw std::overflow_error("ball_count: count exceeds 64-bit range");
  }
  return total;
}

void sites_rec(int dim, int level, std::int64_t bound, std::array<std::int32_t, Site::kMaxDim>& c,
               std::vector<Site>& out) {
  std::int64_t m = isqrt64(bound);
  if (level == dim - 1) {
    for (std::int64_t x = -m; x <= m; ++x) {
      c[level] = static_cast<std::int32_t>(x);
      out.emplace_back(c.data(), dim);
    }
    return;
  }
  for (std::int64_t x = -m; x <= m; ++x) {
    c[level] = static_cast<std::int32_t>(x);
    sites_rec(dim, level + 1, bound - x * x, c, out);
  }
}

std::shared_mutex g_cache_mutex;
std::map<std::pair<int, std::int64_t>, std::int64_t> g_count_cache;

}  // namespace

std::int64_t ball_norm2_bound(double r) {
  if (!(r > 0)) return -1;
  long double s = static_cast<long double>(r) * static_cast<long double>(r);
  // Radii are routinely sqrt-of-integer (|z| for a lattice z), and the double
  // sqrt puts r^2 within a few ulp of that integer. Snap those back so the
  // strict inequality is decided exactly; genuinely non-square radii are
  // orders of magnitude further from an integer.
  long double nearest = std::round(s);
  if (nearest > 0 && std::abs(s - nearest) <= s * 1e-15L)
    return static_cast<std::int64_t>(nearest) - 1;  // |y|^2 == r^2 excluded
  return static_cast<std::int64_t>(std::floor(s));
}

std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::int64_t ball_count_norm2(int dim, std::int64_t bound) {
  check_dim(dim);
  if (bound < 0) return 0;
  {
    std::shared_lock lk(g_cache_mutex);
    auto it = g_count_cache.find({dim, bound});
    if (it != g_count_cache.end()) return it->second;
  }
  // Capacity guards before enumerating: the count must fit in int64 and the
  // coordinates in int32.
  double r = std::sqrt(static_cast<double>(bound) + 1.0);
  if (unit_ball_volume(dim) * std::pow(r + 1.0, dim) > 4.0e18)
    throw std::overflow_error("ball_count: count exceeds 64-bit range");
  if (isqrt64(bound) > (std::int64_t(1) << 30))
    throw std::overflow_error("ball_count: radius exceeds coordinate range");
  std::int64_t n = count_rec(dim, bound);
  std::unique_lock lk(g_cache_mutex);
  g_count_cache.emplace(std::make_pair(dim, bound), n);  // idempotent fill
  return n;
}

std::int64_t ball_count(int dim, double radius) {
  return ball_count_norm2(dim, ball_norm2_bound(radius));
}

std::int64_t rho(int dim, double volume) {
  check_dim(dim);
  if (!(volume >= 0)) throw std::domain_error("rho: volume must be >= 0");
  std::int64_t lo = 0, hi = 1;  // invariant: count(lo) <= volume < count(hi) at the end
  while (ball_count_norm2(dim, hi * hi - 1) <= volume) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (ball_count_norm2(dim, mid * mid - 1) <= volume)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::int64_t shell_count(int dim, double r_inner, double r_outer) {
  if (!(r_inner <= r_outer)) throw std::invalid_argument("shell_count: r_inner > r_outer");
  return ball_count(dim, r_outer) - ball_count(dim, r_inner);
}

std::vector<Site> ball_sites(int dim, std::int64_t bound) {
  check_dim(dim);
  std::vector<Site> out;
  if (bound < 0) return out;
  out.reserve(static_cast<std::size_t>(ball_count_norm2(dim, bound)));
  std::array<std::int32_t, Site::kMaxDim> c{};
  sites_rec(dim, 0, bound, c, out);
  return out;  // recursion emits in lexicographic order
}

std::vector<Site> ball_boundary(int dim, std::int64_t bound) {
  check_dim(dim);
  std::vector<Site> out;
  if (bound < 0) return out;
  // A site y outside the ball touches it iff stepping its largest-magnitude
  // coordinate toward 0 enters: min over axes of |y -+ e_a|^2 is
  // |y|^2 + 1 - 2*max_a |y_a|.
  std::int64_t m = isqrt64(bound) + 1;
  std::array<std::int32_t, Site::kMaxDim> c{};
  // lexicographic scan of the box [-m, m]^dim
  for (int i = 0; i < dim; ++i) c[i] = static_cast<std::int32_t>(-m);
  while (true) {
    std::int64_t n2 = 0, maxabs = 0;
    for (int i = 0; i < dim; ++i) {
      n2 += std::int64_t(c[i]) * c[i];
      std::int64_t a = c[i] < 0 ? -std::int64_t(c[i]) : c[i];
      if (a > maxabs) maxabs = a;
    }
    if (n2 > bound && n2 + 1 - 2 * maxabs <= bound) out.emplace_back(c.data(), dim);
    int i = dim - 1;
    while (i >= 0 && c[i] == m) c[i--] = static_cast<std::int32_t>(-m);
    if (i < 0) break;
    ++c[i];
  }
  return out;
}

std::vector<Site> outer_boundary(const std::vector<Site>& sites) {
  std::vector<Site> out;
  if (sites.empty()) return out;
  int dim = sites.front().dim();
  std::unordered_set<Site, SiteHash> in(sites.begin(), sites.end());
  for (const Site& s : sites)
    if (s.dim() != dim) throw std::invalid_argument("outer_boundary: mixed dimensions");
  std::unordered_set<Site, SiteHash> seen;
  for (const Site& s : sites) {
    for (int d = 0; d < 2 * dim; ++d) {
      Site nb = s.neighbor(d);
      if (!in.count(nb)) seen.insert(nb);
    }
  }
  out.assign(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Site> sphere_shell(const Site& z) {
  check_dim(z.dim());
  if (z.norm2() == 0) throw std::domain_error("sphere_shell: z must be nonzero");
  return ball_boundary(z.dim(), z.norm2() - 1);
}

CapSplit cap_and_complement(const Site& z, double radius) {
  CapSplit split;
  std::int64_t q = ball_norm2_bound(radius);
  for (const Site& y : sphere_shell(z)) {
    if (norm2_diff(y, z) <= q)
      split.cap.push_back(y);
    else
      split.complement.push_back(y);
  }
  return split;
}

}  // namespace idla::geom
