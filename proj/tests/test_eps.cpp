#include "doctest.h"

#include "harness.hpp"
#include "kds/oracle.hpp"

#include <cmath>

using namespace kds;
using namespace kds_test;

namespace {

struct EpsFixture {
  Scenario sc;
  ConeFamily fam;
  SimStats stats;
  EventQueue queue{Algebraic(Rat(0))};
  std::unique_ptr<SemiYaoKds> sy;
  std::unique_ptr<AllNearestKds> ann;
  std::unique_ptr<EpsAnnKds> eps;

  EpsFixture(Scenario s, const Rat& e)
      : sc(std::move(s)), fam(ConeFamily::build(sc.dim, theta_for_eps(e))) {
    sc.eps = e;
    stats.reset_points(sc.points.size());
    sy = std::make_unique<SemiYaoKds>(&sc.points, &fam, &queue, &stats);
    ann = std::make_unique<AllNearestKds>(&sc.points, &queue, &stats);
    sy->set_edge_hook([this](int, uint32_t w, uint32_t t, bool ins) {
      ann->on_edge_change(w, t, ins);
    });
    sy->build();
    ann->build(sy->snapshot());
    eps = std::make_unique<EpsAnnKds>(&sc.points, &fam, &queue, &stats);
    eps->attach(*sy);
  }
};

}  // namespace

TEST_CASE("theta_for_eps hits the documented grid points") {
  CHECK(theta_for_eps(Rat(10)) == Angle{1, 3});    // generous eps: cap
  CHECK(theta_for_eps(Rat(1, 2)) == Angle{1, 6});
  CHECK(theta_for_eps(Rat(1, 5)) == Angle{1, 8});
  CHECK(theta_for_eps(Rat(1, 10)) == Angle{1, 12});
  CHECK(theta_for_eps(Rat(1, 20)) == Angle{1, 16});
  CHECK_THROWS(theta_for_eps(Rat(1, 1000)));  // below the pi/64 grid
  CHECK_THROWS(theta_for_eps(Rat(0)));
  // the pi/6 bound evaluates to 1/(2cos(pi/6)-1) = 1.366... <= 1.5
  double b = 1.0 / (2 * std::cos(M_PI / 6) - 1);
  CHECK(doctest::Approx(b).epsilon(1e-6) == 1.3660254);
  CHECK(b <= 1.5);
}

TEST_CASE("rnn structure bounds and the approximation guarantee") {
  for (auto [n, seed] : {std::pair<int, uint64_t>{64, 3}, {256, 4}}) {
    GenParams p;
    p.n = n;
    p.dim = 2;
    p.degree = 0;
    p.seed = seed;
    Rat e(1, 5);
    EpsFixture f(generate_scenario(p), e);
    size_t lg = 1, p2 = 2;
    while (p2 < size_t(n)) {
      p2 <<= 1;
      ++lg;
    }
    size_t c = f.fam.size();
    CHECK(f.eps->edge_count() <= size_t(n) * (lg + 1) * c);
    size_t degree_bound = (lg + 1) * (lg + 1) * c;
    CHECK(f.eps->max_degree() <= degree_bound);
    // (1 + eps)-nearest at the build instant
    auto nn = oracle::all_nn(f.sc.points, Rat(0), true);
    CHECK(oracle::eps_violation(f.sc.points, f.eps->table(), nn, e, Rat(0)) ==
          kNoPoint);
  }
}

TEST_CASE("two points: eps neighbor is the true neighbor") {
  Scenario sc;
  sc.dim = 2;
  sc.points = {traj2(0, {Rat(0)}, {Rat(0)}), traj2(1, {Rat(1)}, {Rat(2)})};
  EpsFixture f(sc, Rat(1, 2));
  CHECK(f.eps->eps_nearest(0) == 1);
  CHECK(f.eps->eps_nearest(1) == 0);
  // singleton
  Scenario sc1;
  sc1.dim = 2;
  sc1.points = {traj2(0, {Rat(0)}, {Rat(0)})};
  EpsFixture f1(sc1, Rat(1, 2));
  CHECK(f1.eps->eps_nearest(0) == kNoPoint);
}

TEST_CASE("candidate containment: the separating node's r is a witness") {
  GenParams p;
  p.n = 120;
  p.dim = 2;
  p.degree = 0;
  p.seed = 11;
  Rat e(1, 5);
  EpsFixture f(generate_scenario(p), e);
  auto nn = oracle::all_nn(f.sc.points, Rat(0), true);
  auto sn = oracle::Snapshot::at(f.sc.points, Rat(0));
  Rat factor = (1 + e) * (1 + e);
  int checked = 0;
  for (uint32_t q = 0; q < nn.size(); ++q) {
    uint32_t p_nn = nn[q];  // p_nn is the nearest point to q
    if (p_nn == kNoPoint) continue;
    // cone of p_nn that holds q; the unique canonical node of p_nn covering q
    int l = f.fam.cone_of(sn.pos[p_nn], p_nn, sn.pos[q], q);
    const ConeKds& ck = f.sy->cone_kds(l);
    uint32_t witness = kNoPoint;
    int hits = 0;
    for (auto k : ck.canonical_nodes(p_nn))
      if (ck.node_covers(k, q)) {
        witness = ck.node_r(k);
        ++hits;
      }
    CHECK(hits == 1);  // CSPD uniqueness
    REQUIRE(witness != kNoPoint);
    // |p_nn, witness|^2 <= (1+eps)^2 |p_nn, q|^2
    Rat dw = 0, dq = 0;
    for (int i = 0; i < 2; ++i) {
      Rat a = sn.pos[witness][i] - sn.pos[p_nn][i];
      Rat b = sn.pos[q][i] - sn.pos[p_nn][i];
      dw += a * a;
      dq += b * b;
    }
    CHECK(dw <= factor * dq);
    ++checked;
  }
  CHECK(checked == 120);
}

TEST_CASE("kinetic run keeps candidate lists and the guarantee intact") {
  GenParams p;
  p.n = 12;
  p.dim = 2;
  p.degree = 2;
  p.seed = 19;
  Rat e(1, 2);
  EpsFixture f(generate_scenario(p), e);
  size_t probes = 0;
  drive(f.queue, *f.sy, f.ann.get(), f.eps.get(), Rat(1), [&] {
    auto nxt = f.queue.peek_time();
    if (nxt && Algebraic::compare(*nxt, f.queue.now()) == 0) return;
    f.eps->audit_lists();  // N_l(p) == {r(v) : b(v)=p} from scratch
    if (!nxt) return;
    Rat mid = rational_between(f.queue.now(), *nxt);
    if (mid > Rat(1)) return;
    auto nn = oracle::all_nn(f.sc.points, mid, false);
    CHECK(oracle::eps_violation(f.sc.points, f.eps->table(), nn, e, mid) ==
          kNoPoint);
    ++probes;
  });
  CHECK(probes > 10);
}

TEST_CASE("update with unchanged pair is a no-op for the tables") {
  GenParams p;
  p.n = 20;
  p.dim = 2;
  p.degree = 0;
  p.seed = 23;
  EpsFixture f(generate_scenario(p), Rat(1, 2));
  auto before = f.eps->table();
  f.eps->audit_lists();
  CHECK(f.eps->table() == before);
}
