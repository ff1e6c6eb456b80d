#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "idla/core.hpp"

using idla::Site;
namespace core = idla::core;
namespace geom = idla::geom;
namespace walk = idla::walk;

namespace {

std::set<Site> as_set(const std::vector<Site>& v) { return {v.begin(), v.end()}; }

std::set<Site> grown_set(int dim, std::int64_t n, std::uint64_t seed) {
  walk::InstructionStacks st(seed, dim);
  core::Cluster cl(dim, core::radius_hint(dim, n));
  core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, n), core::source_of(st));
  return as_set(cl.sites());
}

}  // namespace

TEST_CASE("Cluster: occupancy, counters, norms") {
  core::Cluster cl(2, 8);
  CHECK(cl.occupied_count() == 0);
  CHECK(cl.max_norm2() == -1);
  CHECK(cl.min_unoccupied() == Site::origin(2));  // empty: the origin itself

  cl.insert(Site::origin(2));
  cl.insert(Site{1, 0});
  CHECK(cl.occupied_count() == 2);
  CHECK(cl.particle_count() == 2);
  CHECK(cl.contains(Site{1, 0}));
  CHECK(!cl.contains(Site{0, 1}));
  CHECK(cl.max_norm2() == 1);
  CHECK_THROWS_AS(cl.insert(Site{1, 0}), std::logic_error);

  // min unoccupied: norm 1 sites left are (-1,0),(0,-1),(0,1); lex least is (-1,0)
  CHECK(cl.min_unoccupied() == Site{-1, 0});
  cl.insert(Site{-1, 0});
  CHECK(cl.min_unoccupied() == Site{0, -1});

  // a site far outside the box hint still round-trips (overflow storage)
  cl.insert(Site{1000, 0});
  CHECK(cl.contains(Site{1000, 0}));
  CHECK(cl.max_norm2() == 1000000);
  auto sites = cl.sites();
  CHECK(sites.size() == 4);
  CHECK(std::is_sorted(sites.begin(), sites.end()));
}

TEST_CASE("Cluster: min_unoccupied ties break lexicographically after a full shell") {
  // occupy B(0,2) = 9 sites, then the minimum unoccupied norm^2 is 4, and the
  // lex-least site at that norm is (-2,0)
  auto ball = geom::ball_sites(2, geom::ball_norm2_bound(2.0));
  auto cl = core::Cluster::from_sites(2, 8, ball);
  CHECK(cl.particle_count() == 0);  // initial sites are not particles
  CHECK(cl.min_unoccupied_norm2() == 4);
  CHECK(cl.min_unoccupied() == Site{-2, 0});
}

TEST_CASE("settle: immediate when start unoccupied; walks consume instructions") {
  core::Cluster cl(2, 8);
  walk::InstructionStacks st(1, 2);
  auto src = core::source_of(st);
  CHECK(core::settle(cl, Site::origin(2), src, 1024) == Site::origin(2));
  cl.insert(Site::origin(2));
  Site s = core::settle(cl, Site::origin(2), src, 1024);
  CHECK(s.norm2() == 1);  // one step off the lone occupied site
}

TEST_CASE("grow_sequential: counts and connectivity (stack and free modes)") {
  for (int dim : {2, 3}) {
    const std::int64_t n = 150;
    walk::RngStream rng(17, 0);
    auto fsrc = core::source_of(rng, dim);
    core::Cluster cl(dim, core::radius_hint(dim, n));
    core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, n), fsrc);
    CHECK(cl.occupied_count() == n);
    CHECK(cl.contains(Site::origin(dim)));
    // every occupied site is the origin or touches another occupied site
    auto sites = cl.sites();
    for (const Site& s : sites) {
      if (s == Site::origin(dim)) continue;
      bool touches = false;
      for (int d = 0; d < 2 * dim; ++d) touches = touches || cl.contains(s.neighbor(d));
      CHECK(touches);
    }
  }
}

TEST_CASE("abelian: launch-order permutations of a multi-site config agree set-exactly") {
  const int dim = 2;
  // build a genuinely multi-site configuration: pause 60 explorers on a sphere
  walk::InstructionStacks prep(5, dim);
  core::Cluster base(dim, 32);
  core::grow_sequential(base, core::ParticleConfig::at_origin(dim, 40), core::source_of(prep));
  auto wave = core::wave_run(base, core::ParticleConfig::at_origin(dim, 60), 5.0, core::source_of(prep));
  REQUIRE(wave.stopped.total() + std::int64_t(wave.settled.size()) == 60);
  REQUIRE(wave.stopped.distinct_sites() > 4);

  std::vector<Site> launch;
  for (const auto& [site, cnt] : wave.stopped)
    for (std::int64_t i = 0; i < cnt; ++i) launch.push_back(site);

  auto base_sites = base.sites();
  std::set<Site> reference;
  {
    walk::InstructionStacks st(99, dim);
    auto cl = core::Cluster::from_sites(dim, 32, base_sites);
    core::grow_in_order(cl, launch, core::source_of(st));
    reference = as_set(cl.sites());
  }
  std::mt19937_64 shuffler(123);
  for (int perm = 0; perm < 10; ++perm) {
    auto order = launch;
    std::shuffle(order.begin(), order.end(), shuffler);
    walk::InstructionStacks st(99, dim);  // same stacks, different schedule
    auto cl = core::Cluster::from_sites(dim, 32, base_sites);
    core::grow_in_order(cl, order, core::source_of(st));
    CHECK(as_set(cl.sites()) == reference);
  }
}

TEST_CASE("abelian: three-wave build equals the one-shot build") {
  for (auto [n, m, R] : {std::tuple<std::int64_t, std::int64_t, double>{80, 70, 5.0},
                         {120, 30, 7.5},
                         {10, 90, 3.0}}) {
    std::uint64_t seed = 1000 + static_cast<std::uint64_t>(n);
    auto one_shot = grown_set(2, n + m, seed);
    walk::InstructionStacks st(seed, 2);
    auto three = core::three_wave_build(2, n, m, R, core::source_of(st));
    CHECK(as_set(three.sites()) == one_shot);
    CHECK(three.occupied_count() == n + m);
  }
}

TEST_CASE("three-wave with m=0 or R=0 degenerates to plain growth") {
  auto a = grown_set(2, 50, 7);
  walk::InstructionStacks st(7, 2);
  auto b = core::three_wave_build(2, 50, 0, 4.0, core::source_of(st));
  CHECK(as_set(b.sites()) == a);

  // R=0: wave-2 explorers pause at the origin itself, then release
  walk::InstructionStacks st2(7, 2);
  auto c = core::three_wave_build(2, 30, 20, 0.0, core::source_of(st2));
  CHECK(as_set(c.sites()) == grown_set(2, 50, 7));
}

TEST_CASE("wave_run: conservation, pause sites, and the W <= M coupling") {
  const int dim = 2;
  walk::RngStream rng(21, 4);
  auto src = core::source_of(rng, dim);
  core::Cluster cl(dim, 24);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(dim, 60), src);

  const double R = 6.0;
  core::WaveOptions opt;
  opt.track_visits = opt.track_free = true;
  auto before = cl.occupied_count();
  auto w = core::wave_run(cl, core::ParticleConfig::at_origin(dim, 120), R, src, opt);

  CHECK(w.launched == 120);
  CHECK(w.stopped.total() + std::int64_t(w.settled.size()) == 120);
  CHECK(cl.occupied_count() == before + std::int64_t(w.settled.size()));

  // paused explorers sit on the outer boundary of B(0,R)
  auto boundary = geom::ball_boundary(dim, geom::ball_norm2_bound(R));
  for (const auto& [site, cnt] : w.stopped) {
    CHECK(cnt > 0);
    CHECK(std::count(boundary.begin(), boundary.end(), site) == 1);
  }

  // natural coupling: W_R(z) <= M_R(z) everywhere, and the visit support
  // includes every settled site
  for (const auto& [site, v] : w.visits) {
    auto it = w.free_exits.find(site);
    REQUIRE(it != w.free_exits.end());
    CHECK(v <= it->second);
  }
  for (const Site& s : w.settled) CHECK(w.visits.count(s) == 1);
}

TEST_CASE("wave_run: saturated ball makes W = M on the boundary") {
  // cluster already covers B(0,R): no explorer settles, every walk is free
  const double R = 4.0;
  auto ball = geom::ball_sites(2, geom::ball_norm2_bound(R));
  auto cl = core::Cluster::from_sites(2, 16, ball);
  walk::RngStream rng(3, 9);
  core::WaveOptions opt;
  opt.track_visits = opt.track_free = true;
  auto w = core::wave_run(cl, core::ParticleConfig::at_origin(2, 200), R, core::source_of(rng, 2), opt);
  CHECK(w.settled.empty());
  CHECK(w.stopped.total() == 200);
  CHECK(w.visits == w.free_exits);
  for (const auto& [site, cnt] : w.stopped) CHECK(w.visits.at(site) == cnt);
}

TEST_CASE("wave_run: R=0 pauses everything at the start site") {
  core::Cluster cl(2, 8);
  walk::RngStream rng(1, 1);
  auto w = core::wave_run(cl, core::ParticleConfig::at_origin(2, 25), 0.0, core::source_of(rng, 2));
  CHECK(w.stopped.total() == 25);
  CHECK(w.stopped.count_at(Site::origin(2)) == 25);
  CHECK(w.settled.empty());
}

TEST_CASE("stack-coupled wave pause/release reproduces the one-shot set at many radii") {
  auto reference = grown_set(2, 200, 31);
  for (double R : {2.0, 5.0, 9.0, 14.0}) {
    walk::InstructionStacks st(31, 2);
    auto cl = core::three_wave_build(2, 120, 80, R, core::source_of(st));
    CHECK(as_set(cl.sites()) == reference);
  }
}

TEST_CASE("snapshot: bit-exact round trip") {
  walk::RngStream rng(77, 0);
  core::Cluster cl(2, 16);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(2, 40), core::source_of(rng, 2));

  std::ostringstream os;
  cl.write_snapshot(os, 77);
  std::string text = os.str();
  CHECK(text.substr(0, 2) == "# ");
  CHECK(text.find("# idla d=2 particles=40 seed=77\n") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 41);  // header + one line per site

  std::istringstream is(text);
  auto snap = core::Cluster::read_snapshot(is);
  CHECK(snap.seed == 77);
  CHECK(snap.cluster.particle_count() == 40);
  CHECK(snap.cluster.sites() == cl.sites());

  std::ostringstream os2;
  snap.cluster.write_snapshot(os2, snap.seed);
  CHECK(os2.str() == text);

  std::istringstream bad("# idla d=2 particles=nope seed=1\n");
  CHECK_THROWS_AS(core::Cluster::read_snapshot(bad), std::invalid_argument);
  std::istringstream bad2("");
  CHECK_THROWS_AS(core::Cluster::read_snapshot(bad2), std::invalid_argument);
  std::istringstream bad3("# idla d=2 particles=1 seed=1\n0 0 0\n");
  CHECK_THROWS_AS(core::Cluster::read_snapshot(bad3), std::invalid_argument);
}

TEST_CASE("free-mode growth is reproducible from (seed, stream)") {
  auto a = [&] {
    walk::RngStream rng(8, 15);
    core::Cluster cl(3, 12);
    core::grow_sequential(cl, core::ParticleConfig::at_origin(3, 100), core::source_of(rng, 3));
    return cl.sites();
  }();
  walk::RngStream rng(8, 15);
  core::Cluster cl(3, 12);
  core::grow_sequential(cl, core::ParticleConfig::at_origin(3, 100), core::source_of(rng, 3));
  CHECK(cl.sites() == a);
}
