#include "doctest.h"

#include "harness.hpp"
#include "kds/oracle.hpp"

using namespace kds;
using namespace kds_test;

namespace {

struct AnnFixture {
  Scenario sc;
  ConeFamily fam;
  SimStats stats;
  EventQueue queue{Algebraic(Rat(0))};
  std::unique_ptr<SemiYaoKds> sy;
  std::unique_ptr<AllNearestKds> ann;

  explicit AnnFixture(Scenario s)
      : sc(std::move(s)), fam(ConeFamily::build(sc.dim, Angle{1, 3})) {
    stats.reset_points(sc.points.size());
    sy = std::make_unique<SemiYaoKds>(&sc.points, &fam, &queue, &stats);
    ann = std::make_unique<AllNearestKds>(&sc.points, &queue, &stats);
    sy->set_edge_hook([this](int, uint32_t w, uint32_t t, bool ins) {
      ann->on_edge_change(w, t, ins);
    });
    sy->build();
    ann->build(sy->snapshot());
  }
};

}  // namespace

TEST_CASE("static all-nearest-neighbors equals the brute oracle") {
  for (auto [n, dim, seed] : {std::tuple<int, int, uint64_t>{200, 2, 8},
                              {100, 3, 9}}) {
    GenParams p;
    p.n = n;
    p.dim = dim;
    p.degree = 0;
    p.seed = seed;
    AnnFixture f(generate_scenario(p));
    CHECK(f.ann->nn_table() == oracle::all_nn(f.sc.points, Rat(0), true));
  }
}

TEST_CASE("two points are mutual nearest neighbors") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(0)}, {Rat(0)}), traj2(1, {Rat(1)}, {Rat(1)})};
  AnnFixture f(sc);
  CHECK(f.ann->nearest(0) == 1);
  CHECK(f.ann->nearest(1) == 0);
  auto cp = f.ann->closest_pair(Rat(0));
  REQUIRE(cp.has_value());
  CHECK(*cp == std::make_pair(0u, 1u));
}

TEST_CASE("collinear equidistant triple breaks ties by id") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(-1)}, {Rat(0)}), traj2(1, {Rat(0)}, {Rat(0)}),
               traj2(2, {Rat(1)}, {Rat(0)})};
  AnnFixture f(sc);
  CHECK(f.ann->nearest(0) == 1);
  CHECK(f.ann->nearest(1) == 0);  // tie between 0 and 2
  CHECK(f.ann->nearest(2) == 1);
}

TEST_CASE("undirected dedup: double-directed edge is stored once") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(0)}, {Rat(0)}), traj2(1, {Rat(1)}, {Rat(0)}),
               traj2(2, {Rat(-1)}, {Rat(2)})};
  AnnFixture f(sc);
  // mutual targets (0<->1) appear once in each tournament
  CHECK(f.ann->tree(0).size() >= 1);
  size_t inc0 = f.ann->tree(0).size();
  // deleting one direction keeps the edge; deleting both removes it
  f.ann->on_edge_change(0, 1, false);
  CHECK(f.ann->tree(0).size() == inc0);
  f.ann->on_edge_change(1, 0, false);
  CHECK(f.ann->tree(0).size() == inc0 - 1);
  // restore
  f.ann->on_edge_change(1, 0, true);
  f.ann->on_edge_change(0, 1, true);
  CHECK(f.ann->tree(0).size() == inc0);
  CHECK(f.ann->nearest(0) == 1);
}

TEST_CASE("deleting the nearest edge promotes the runner-up") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(0)}, {Rat(0)}), traj2(1, {Rat(1)}, {Rat(0)}),
               traj2(2, {Rat(-1)}, {Rat(2)})};
  AnnFixture f(sc);
  CHECK(f.ann->nearest(0) == 1);
  f.ann->on_edge_change(0, 1, false);
  f.ann->on_edge_change(1, 0, false);
  CHECK(f.ann->nearest(0) == 2);  // runner-up from Inc(0)
}

TEST_CASE("closest pair with an outlier, ties by (min id, max id)") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(0)}, {Rat(0)}), traj2(1, {Rat(1, 4)}, {Rat(0)}),
               traj2(2, {Rat(50)}, {Rat(50)})};
  AnnFixture f(sc);
  auto cp = f.ann->closest_pair(Rat(0));
  REQUIRE(cp.has_value());
  CHECK(*cp == std::make_pair(0u, 1u));
  CHECK(!AnnFixture(Scenario{}).ann->closest_pair(Rat(0)).has_value());
}

TEST_CASE("kinetic nn maintenance matches the oracle at probes") {
  GenParams p;
  p.n = 16;
  p.dim = 2;
  p.degree = 2;
  p.seed = 31;
  AnnFixture f(generate_scenario(p));
  size_t checked = 0;
  drive(f.queue, *f.sy, f.ann.get(), nullptr, Rat(1), [&] {
    auto nxt = f.queue.peek_time();
    if (!nxt || Algebraic::compare(*nxt, f.queue.now()) == 0) return;
    Rat mid = rational_between(f.queue.now(), *nxt);
    CHECK(f.ann->nn_table() == oracle::all_nn(f.sc.points, mid, false));
    ++checked;
  });
  CHECK(checked > 10);
  // incidence bookkeeping: Σ|Inc| is twice the undirected edge count
  CHECK(f.ann->inc_total() == 2 * f.sy->undirected_edges().size());
}
