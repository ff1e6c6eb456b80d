#include "idla/oracle.hpp"

#include <gmpxx.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>

#include "idla/core.hpp"
#include "idla/geometry.hpp"

namespace idla::oracle {

namespace {

void check_cluster(const std::vector<Site>& cluster, const Site& start) {
  if (cluster.size() > 1000)
    throw std::invalid_argument("settle_distribution_exact: cluster exceeds 1000 sites");
  for (const Site& s : cluster)
    if (s.dim() != start.dim())
      throw std::invalid_argument("settle_distribution_exact: mixed dimensions");
}

using Index = std::unordered_map<Site, std::size_t, SiteHash>;

Index index_of(const std::vector<Site>& cluster) {
  Index idx;
  idx.reserve(cluster.size() * 2);
  for (std::size_t i = 0; i < cluster.size(); ++i) idx.emplace(cluster[i], i);
  return idx;
}

// Exact absorption probabilities. The transition matrix restricted to the
// cluster is symmetric (uniform nearest-neighbour steps), so solving
// (I - Q) y = e_start gives the visit weights y_x of a walk from `start`,
// and the exit mass at target t is sum_x y_x / 2d over occupied x ~ t.
std::map<Site, mpq_class> settle_mpq(const std::vector<Site>& cluster, const Site& start,
                                     const Index& idx) {
  const std::size_t n = cluster.size();
  const int two_d = 2 * start.dim();
  const mpq_class step(1, two_d);

  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1;
    for (int d = 0; d < two_d; ++d) {
      auto it = idx.find(cluster[i].neighbor(d));
      if (it != idx.end()) m[i][it->second] -= step;
    }
  }
  m[idx.at(start)][n] = 1;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::runtime_error("settle_distribution_exact: singular system");
    if (pivot != col) std::swap(m[pivot], m[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      mpq_class f = m[row][col] / m[col][col];
      for (std::size_t j = col; j <= n; ++j) m[row][j] -= f * m[col][j];
    }
  }

  std::map<Site, mpq_class> out;
  for (std::size_t i = 0; i < n; ++i) {
    mpq_class y = m[i][n] / m[i][i];
    if (y == 0) continue;
    for (int d = 0; d < two_d; ++d) {
      Site t = cluster[i].neighbor(d);
      if (!idx.count(t)) out[t] += y * step;
    }
  }
  mpq_class total = 0;
  for (const auto& [t, p] : out) total += p;
  if (total != 1) throw std::runtime_error("settle_distribution_exact: exit mass != 1");
  return out;
}

SettleDistribution settle_lu(const std::vector<Site>& cluster, const Site& start,
                             const Index& idx) {
  const std::size_t n = cluster.size();
  const int two_d = 2 * start.dim();
  const double step = 1.0 / two_d;

  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (int d = 0; d < two_d; ++d) {
      auto it = idx.find(cluster[i].neighbor(d));
      if (it != idx.end()) m(i, it->second) -= step;
    }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(idx.at(start)) = 1.0;

  Eigen::VectorXd y = Eigen::PartialPivLU<Eigen::MatrixXd>(m).solve(e);
  double residual = (m * y - e).lpNorm<Eigen::Infinity>();
  if (!std::isfinite(residual) || residual > 1e-10)
    throw std::runtime_error("settle_distribution_exact: absorption solve residual too large");

  SettleDistribution out;
  for (std::size_t i = 0; i < n; ++i) {
    if (y(i) == 0.0) continue;
    for (int d = 0; d < two_d; ++d) {
      Site t = cluster[i].neighbor(d);
      if (!idx.count(t)) out[t] += y(i) * step;
    }
  }
  double total = 0;
  for (const auto& [t, p] : out) total += p;
  if (std::abs(total - 1.0) > 1e-10)
    throw std::runtime_error("settle_distribution_exact: exit mass deviates from 1");
  return out;
}

}  // namespace

SettleDistribution settle_distribution_exact(const std::vector<Site>& cluster, const Site& start,
                                             std::size_t exact_limit) {
  check_cluster(cluster, start);
  auto idx = index_of(cluster);
  if (!idx.count(start)) return {{start, 1.0}};
  if (cluster.size() <= exact_limit) {
    SettleDistribution out;
    for (const auto& [t, p] : settle_mpq(cluster, start, idx)) out.emplace(t, p.get_d());
    return out;
  }
  return settle_lu(cluster, start, idx);
}

ShapeDistribution cluster_distribution_exact(int k, int dim) {
  if (dim < 2 || dim > Site::kMaxDim)
    throw std::invalid_argument("cluster_distribution_exact: dim out of range");
  if (k < 1) throw std::invalid_argument("cluster_distribution_exact: k must be positive");
  if (k > 5) throw std::out_of_range("cluster_distribution_exact: k exceeds capacity (max 5)");

  const Site origin = Site::origin(dim);
  std::map<std::vector<Site>, mpq_class> cur{{{origin}, mpq_class(1)}};
  for (int step = 2; step <= k; ++step) {
    std::map<std::vector<Site>, mpq_class> next;
    for (const auto& [shape, mass] : cur) {
      auto dist = settle_mpq(shape, origin, index_of(shape));
      for (const auto& [target, p] : dist) {
        std::vector<Site> grown = shape;
        grown.insert(std::upper_bound(grown.begin(), grown.end(), target), target);
        next[grown] += mass * p;
      }
    }
    cur = std::move(next);
  }

  ShapeDistribution out;
  for (const auto& [shape, mass] : cur) out.emplace(shape, mass.get_d());
  return out;
}

ShapeDistribution cluster_distribution_mc(int k, int dim, std::int64_t samples,
                                          std::uint64_t seed) {
  if (dim < 2 || dim > Site::kMaxDim)
    throw std::invalid_argument("cluster_distribution_mc: dim out of range");
  if (k < 1) throw std::invalid_argument("cluster_distribution_mc: k must be positive");
  if (samples < 1) throw std::invalid_argument("cluster_distribution_mc: samples must be positive");

  std::map<std::vector<Site>, std::int64_t> counts;
  for (std::int64_t rep = 0; rep < samples; ++rep) {
    walk::RngStream rng(seed, static_cast<std::uint64_t>(rep));
    auto src = core::source_of(rng, dim);
    core::Cluster cl(dim, k + 2);
    core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, k), src);
    ++counts[cl.sites()];
  }
  ShapeDistribution out;
  const double inv = 1.0 / static_cast<double>(samples);
  for (const auto& [shape, c] : counts) out.emplace(shape, static_cast<double>(c) * inv);
  return out;
}

double tv_distance(const ShapeDistribution& p, const ShapeDistribution& q) {
  double sum = 0;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      sum += std::abs(ip->second);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      sum += std::abs(iq->second);
      ++iq;
    } else {
      sum += std::abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  return 0.5 * sum;
}

}  // namespace idla::oracle
