#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "idla/core.hpp"
#include "idla/geometry.hpp"
#include "idla/oracle.hpp"

using idla::Site;
namespace geom = idla::geom;
namespace core = idla::core;
namespace oracle = idla::oracle;

namespace {

bool connected(const std::vector<Site>& shape) {
  if (shape.empty()) return false;
  std::set<Site> left(shape.begin(), shape.end());
  std::queue<Site> q;
  q.push(shape.front());
  left.erase(shape.front());
  while (!q.empty()) {
    Site s = q.front();
    q.pop();
    for (int d = 0; d < 2 * s.dim(); ++d) {
      auto it = left.find(s.neighbor(d));
      if (it != left.end()) {
        q.push(*it);
        left.erase(it);
      }
    }
  }
  return left.empty();
}

// the eight symmetries of the square lattice, as (swap axes?, sign flips)
Site dihedral(const Site& s, int g) {
  int x = s[0], y = s[1];
  if (g & 4) std::swap(x, y);
  if (g & 1) x = -x;
  if (g & 2) y = -y;
  return Site{x, y};
}

std::vector<Site> dihedral_shape(const std::vector<Site>& shape, int g) {
  std::vector<Site> out;
  out.reserve(shape.size());
  for (const Site& s : shape) out.push_back(dihedral(s, g));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("settle distribution: single-site cluster splits uniformly") {
  auto d2 = oracle::settle_distribution_exact({Site::origin(2)}, Site::origin(2));
  REQUIRE(d2.size() == 4);
  for (const auto& [t, p] : d2) {
    CHECK(t.norm2() == 1);
    CHECK(p == 0.25);  // exact: rationals with power-of-two denominators
  }
  auto d3 = oracle::settle_distribution_exact({Site::origin(3)}, Site::origin(3));
  REQUIRE(d3.size() == 6);
  for (const auto& [t, p] : d3) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("settle distribution: start outside the cluster is a point mass") {
  auto d = oracle::settle_distribution_exact({Site::origin(2), Site{1, 0}}, Site{5, 5});
  REQUIRE(d.size() == 1);
  CHECK(d.at(Site{5, 5}) == 1.0);
}

TEST_CASE("settle distribution: domino cluster, hand-solved absorption system") {
  // cluster {0,(1,0)}: p_0 = c_0 + p_1/4, p_1 = c_1 + p_0/4 gives exit mass
  // 4/15 at each target adjacent to the start and 1/15 adjacent to the mate
  std::vector<Site> cluster{Site::origin(2), Site{1, 0}};
  auto d = oracle::settle_distribution_exact(cluster, Site::origin(2));
  REQUIRE(d.size() == 6);
  const double heavy = 4.0 / 15.0, light = 1.0 / 15.0;
  CHECK(d.at(Site{-1, 0}) == doctest::Approx(heavy).epsilon(1e-15));
  CHECK(d.at(Site{0, 1}) == doctest::Approx(heavy).epsilon(1e-15));
  CHECK(d.at(Site{0, -1}) == doctest::Approx(heavy).epsilon(1e-15));
  CHECK(d.at(Site{2, 0}) == doctest::Approx(light).epsilon(1e-15));
  CHECK(d.at(Site{1, 1}) == doctest::Approx(light).epsilon(1e-15));
  CHECK(d.at(Site{1, -1}) == doctest::Approx(light).epsilon(1e-15));

  // mirror symmetry in the second coordinate holds exactly
  for (const auto& [t, p] : d) CHECK(p == d.at(Site{t[0], -t[1]}));

  double total = 0;
  for (const auto& [t, p] : d) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("settle distribution: 1e6-sample MC agrees with the solve within 4 sigma") {
  std::vector<Site> sites{Site::origin(2), Site{1, 0}};
  auto exact = oracle::settle_distribution_exact(sites, Site::origin(2));

  const std::int64_t n = 1000000;
  auto cl = core::Cluster::from_sites(2, 8, sites);
  idla::walk::RngStream rng(404, 0);
  auto src = core::source_of(rng, 2);
  std::map<Site, std::int64_t> counts;
  for (std::int64_t i = 0; i < n; ++i) ++counts[core::settle(cl, Site::origin(2), src, 1 << 20)];

  for (const auto& [t, p] : exact) {
    double hat = static_cast<double>(counts[t]) / n;
    double sigma = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(hat - p) <= 4.0 * sigma);
  }
}

TEST_CASE("settle distribution: equivariance under lattice symmetries") {
  std::vector<Site> cluster{Site::origin(2), Site{1, 0}, Site{0, 1}, Site{1, 1}, Site{2, 0}};
  auto base = oracle::settle_distribution_exact(cluster, Site{1, 0});
  for (int g = 1; g < 8; ++g) {
    std::vector<Site> moved;
    for (const Site& s : cluster) moved.push_back(dihedral(s, g));
    auto d = oracle::settle_distribution_exact(moved, dihedral(Site{1, 0}, g));
    REQUIRE(d.size() == base.size());
    for (const auto& [t, p] : base) CHECK(d.at(dihedral(t, g)) == p);
  }
}

TEST_CASE("settle distribution: rational and LU paths agree on the same cluster") {
  auto cluster = geom::ball_sites(2, geom::ball_norm2_bound(2.3));  // norm^2 <= 5
  REQUIRE(cluster.size() == 21);
  auto exact = oracle::settle_distribution_exact(cluster, Site{1, 1}, 64);
  auto lu = oracle::settle_distribution_exact(cluster, Site{1, 1}, 0);
  REQUIRE(exact.size() == lu.size());
  for (const auto& [t, p] : exact) CHECK(lu.at(t) == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("settle distribution: LU path on a 69-site ball") {
  auto cluster = geom::ball_sites(2, geom::ball_norm2_bound(5.0));
  REQUIRE(cluster.size() == 69);
  auto d = oracle::settle_distribution_exact(cluster, Site::origin(2));

  auto boundary = geom::outer_boundary(cluster);
  REQUIRE(d.size() == boundary.size());
  double total = 0;
  for (const Site& t : boundary) {
    REQUIRE(d.count(t) == 1);
    total += d.at(t);
  }
  CHECK(std::abs(total - 1.0) <= 1e-10);
  for (const auto& [t, p] : d)
    for (int g = 1; g < 8; ++g) CHECK(d.at(dihedral(t, g)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("settle distribution: oversized cluster and mixed dimensions rejected") {
  auto big = geom::ball_sites(2, geom::ball_norm2_bound(21.0));  // 1385 sites
  REQUIRE(big.size() > 1000);
  CHECK_THROWS_AS(oracle::settle_distribution_exact(big, Site::origin(2)), std::invalid_argument);
  CHECK_THROWS_AS(
      oracle::settle_distribution_exact({Site::origin(2)}, Site::origin(3)),
      std::invalid_argument);
}

TEST_CASE("shape distribution: k=1 and k=2 are forced by symmetry") {
  auto one = oracle::cluster_distribution_exact(1, 2);
  REQUIRE(one.size() == 1);
  CHECK(one.at({Site::origin(2)}) == 1.0);

  auto two = oracle::cluster_distribution_exact(2, 2);
  REQUIRE(two.size() == 4);
  for (const auto& [shape, p] : two) {
    REQUIRE(shape.size() == 2);
    CHECK(p == 0.25);
    CHECK(std::count(shape.begin(), shape.end(), Site::origin(2)) == 1);
  }

  auto two3 = oracle::cluster_distribution_exact(2, 3);
  REQUIRE(two3.size() == 6);
  for (const auto& [shape, p] : two3) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("shape distribution: k=3 in d=2, propagated by hand through the domino solve") {
  auto dist = oracle::cluster_distribution_exact(3, 2);
  REQUIRE(dist.size() == 18);

  // two parents contribute 4/15 each: straight trominoes through the origin
  // and corners at the origin; one parent contributes: end-of-line shapes
  CHECK(dist.at({Site{-1, 0}, Site{0, 0}, Site{1, 0}}) ==
        doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  CHECK(dist.at({Site{0, -1}, Site{0, 0}, Site{0, 1}}) ==
        doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  CHECK(dist.at({Site{0, 0}, Site{0, 1}, Site{1, 0}}) ==
        doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  CHECK(dist.at({Site{0, 0}, Site{1, 0}, Site{2, 0}}) ==
        doctest::Approx(1.0 / 60.0).epsilon(1e-14));
  CHECK(dist.at({Site{0, 0}, Site{1, 0}, Site{1, 1}}) ==
        doctest::Approx(1.0 / 60.0).epsilon(1e-14));

  double total = 0;
  for (const auto& [shape, p] : dist) {
    REQUIRE(shape.size() == 3);
    CHECK(std::count(shape.begin(), shape.end(), Site::origin(2)) == 1);
    CHECK(connected(shape));
    total += p;
    // the full dihedral group fixes the law
    for (int g = 1; g < 8; ++g) CHECK(dist.at(dihedral_shape(shape, g)) == p);
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("shape distribution: k=4 stays a probability law on connected origin shapes") {
  auto dist = oracle::cluster_distribution_exact(4, 2);
  double total = 0;
  for (const auto& [shape, p] : dist) {
    REQUIRE(shape.size() == 4);
    CHECK(connected(shape));
    CHECK(p > 0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("shape distribution: capacity and argument errors") {
  CHECK_THROWS_AS(oracle::cluster_distribution_exact(6, 2), std::out_of_range);
  CHECK_THROWS_AS(oracle::cluster_distribution_exact(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(oracle::cluster_distribution_exact(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(oracle::cluster_distribution_mc(3, 2, 0, 1), std::invalid_argument);
}

TEST_CASE("shape distribution: 2e5 MC samples land within TV 0.015 of the recursion") {
  auto exact = oracle::cluster_distribution_exact(3, 2);
  auto mc = oracle::cluster_distribution_mc(3, 2, 200000, 2024);
  double tv = oracle::tv_distance(exact, mc);
  CHECK(tv < 0.015);
  CHECK(tv > 0.0);  // an empirical law never matches exactly

  // convergence direction: 10x fewer samples, distinctly larger distance
  auto coarse = oracle::cluster_distribution_mc(3, 2, 2000, 2024);
  CHECK(oracle::tv_distance(exact, coarse) > tv);
}

TEST_CASE("tv_distance: endpoints and mass moves") {
  using Shape = std::vector<Site>;
  Shape a{Site::origin(2)}, b{Site::origin(2), Site{1, 0}}, c{Site::origin(2), Site{0, 1}};
  Shape e{Site::origin(2), Site{-1, 0}};
  oracle::ShapeDistribution p{{a, 0.25}, {b, 0.25}, {c, 0.25}, {e, 0.25}};
  CHECK(oracle::tv_distance(p, p) == 0.0);

  oracle::ShapeDistribution q{{a, 0.15}, {b, 0.35}, {c, 0.25}, {e, 0.25}};
  CHECK(oracle::tv_distance(p, q) == doctest::Approx(0.1).epsilon(1e-15));

  oracle::ShapeDistribution r{{Shape{Site{5, 5}}, 1.0}};
  oracle::ShapeDistribution s{{Shape{Site{6, 6}}, 1.0}};
  CHECK(oracle::tv_distance(r, s) == 1.0);
}
