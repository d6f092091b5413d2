#include "doctest.h"

#include "kds/event_queue.hpp"

using namespace kds;

namespace {

Certificate order_cert(int cone, int axis, uint32_t a, uint32_t b,
                       std::optional<Algebraic> when) {
  Certificate c;
  c.kind = axis == 2 ? CertKind::kOrderX : CertKind::kOrderU;
  c.cone = int16_t(cone);
  c.axis = int16_t(axis);
  c.a = a;
  c.b = b;
  c.when = std::move(when);
  return c;
}

}  // namespace

TEST_CASE("empty queue yields nothing") {
  EventQueue q(Algebraic(Rat(0)));
  CHECK(!q.advance(Algebraic(Rat(100))).has_value());
  CHECK(!q.peek_time().has_value());
}

TEST_CASE("single certificate pops at its failure time") {
  EventQueue q(Algebraic(Rat(0)));
  q.schedule(order_cert(0, 0, 1, 2, Algebraic(Rat(2))));
  auto h = q.advance(Algebraic(Rat(10)));
  REQUIRE(h.has_value());
  CHECK(q.now().compare_rat(Rat(2)) == 0);
  CHECK(q.cert(*h).a == 1);
  CHECK(!q.advance(Algebraic(Rat(10))).has_value());
}

TEST_CASE("parked certificates never pop") {
  EventQueue q(Algebraic(Rat(0)));
  q.schedule(order_cert(0, 0, 1, 2, std::nullopt));
  CHECK(q.live_count() == 1);
  CHECK(!q.advance(Algebraic(Rat(1000))).has_value());
}

TEST_CASE("horizon bounds event processing") {
  EventQueue q(Algebraic(Rat(0)));
  q.schedule(order_cert(0, 0, 1, 2, Algebraic(Rat(5))));
  CHECK(!q.advance(Algebraic(Rat(4))).has_value());
  CHECK(q.advance(Algebraic(Rat(5))).has_value());  // inclusive
}

TEST_CASE("simultaneous events pop in deterministic tiebreak order") {
  // kind priority order(u) < order(x) < tournament, then cone, axis, ids
  EventQueue q(Algebraic(Rat(0)));
  Certificate t;
  t.kind = CertKind::kTournament;
  t.domain = 0;
  t.owner = 0;
  t.a = 1;
  t.when = Algebraic(Rat(1));
  q.schedule(t);
  q.schedule(order_cert(2, 2, 5, 6, Algebraic(Rat(1))));
  q.schedule(order_cert(1, 0, 9, 3, Algebraic(Rat(1))));
  q.schedule(order_cert(0, 1, 7, 8, Algebraic(Rat(1))));
  std::vector<CertKind> kinds;
  std::vector<int> cones;
  while (auto h = q.advance(Algebraic(Rat(2)))) {
    kinds.push_back(q.cert(*h).kind);
    cones.push_back(q.cert(*h).cone);
  }
  REQUIRE(kinds.size() == 4);
  CHECK(kinds[0] == CertKind::kOrderU);
  CHECK(cones[0] == 0);
  CHECK(kinds[1] == CertKind::kOrderU);
  CHECK(cones[1] == 1);
  CHECK(kinds[2] == CertKind::kOrderX);
  CHECK(kinds[3] == CertKind::kTournament);
}

TEST_CASE("descheduled certificates are skipped lazily") {
  EventQueue q(Algebraic(Rat(0)));
  uint32_t h1 = q.schedule(order_cert(0, 0, 1, 2, Algebraic(Rat(1))));
  q.schedule(order_cert(0, 0, 3, 4, Algebraic(Rat(2))));
  q.deschedule(h1);
  auto h = q.advance(Algebraic(Rat(10)));
  REQUIRE(h.has_value());
  CHECK(q.cert(*h).a == 3);
  CHECK(q.now().compare_rat(Rat(2)) == 0);
}

TEST_CASE("slot reuse does not resurrect stale heap entries") {
  EventQueue q(Algebraic(Rat(0)));
  uint32_t h1 = q.schedule(order_cert(0, 0, 1, 2, Algebraic(Rat(1))));
  q.deschedule(h1);
  // new certificate likely reuses the slot with a later time
  q.schedule(order_cert(0, 0, 7, 7, Algebraic(Rat(5))));
  auto h = q.advance(Algebraic(Rat(10)));
  REQUIRE(h.has_value());
  CHECK(q.cert(*h).a == 7);
  CHECK(q.now().compare_rat(Rat(5)) == 0);
}

TEST_CASE("time never decreases and algebraic times order exactly") {
  EventQueue q(Algebraic(Rat(0)));
  // sqrt(2) vs 1.41421356... : the rational is below sqrt(2)
  RatPoly p(std::vector<Rat>{Rat(-2), Rat(0), Rat(1)});
  auto roots = all_sign_changes(p);
  q.schedule(order_cert(0, 0, 1, 2, roots[1]));  // sqrt(2)
  q.schedule(order_cert(0, 0, 3, 4,
                        Algebraic(Rat(141421356, 100000000))));
  auto h = q.advance(Algebraic(Rat(10)));
  REQUIRE(h.has_value());
  CHECK(q.cert(*h).a == 3);  // rational approximant below the root pops first
  h = q.advance(Algebraic(Rat(10)));
  REQUIRE(h.has_value());
  CHECK(q.cert(*h).a == 1);
}
