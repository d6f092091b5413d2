#include "doctest.h"

#include "kds/dktt.hpp"

#include <map>
#include <random>

using namespace kds;

namespace {

RatPoly poly(std::vector<Rat> c) { return RatPoly(std::move(c)); }

// linear-scan argmin with the same right-limit + id tie rule
uint32_t argmin_oracle(const std::map<uint32_t, RatPoly>& elems,
                       const Algebraic& t) {
  uint32_t best = kNoPoint;
  for (const auto& [e, v] : elems) {
    if (best == kNoPoint) {
      best = e;
      continue;
    }
    int s = sign_just_after(v - elems.at(best), t);
    if (s < 0 || (s == 0 && e < best)) best = e;
  }
  return best;
}

}  // namespace

TEST_CASE("empty and singleton tournaments") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 0);
  CHECK(tt.winner() == kNoPoint);
  tt.insert(5, poly({Rat(3)}));
  CHECK(tt.winner() == 5);
  tt.erase(5);
  CHECK(tt.winner() == kNoPoint);
  CHECK(tt.empty());
}

TEST_CASE("static build matches argmin and ties break by id") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 0);
  std::map<uint32_t, RatPoly> elems;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> c(1, 40);
  for (uint32_t e = 0; e < 100; ++e) {
    RatPoly v = poly({Rat(c(rng), 4)});
    elems.emplace(e, v);
    tt.insert(e, v);
  }
  CHECK(tt.winner() == argmin_oracle(elems, q.now()));
  // exact duplicate values: lower id wins
  SimStats st2;
  EventQueue q2(Algebraic(Rat(0)));
  TournamentTree t2(&q2, &st2, 0, 0);
  t2.insert(9, poly({Rat(1)}));
  t2.insert(4, poly({Rat(1)}));
  t2.insert(7, poly({Rat(1)}));
  CHECK(t2.winner() == 4);
  // identical values never generate events: certificates stay parked
  CHECK(!q2.advance(Algebraic(Rat(1000000))).has_value());
}

TEST_CASE("delete of the winner promotes the runner-up") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 0);
  std::map<uint32_t, RatPoly> elems;
  for (uint32_t e = 0; e < 20; ++e) {
    RatPoly v = poly({Rat(e * 3 + 1, 2)});
    elems.emplace(e, v);
    tt.insert(e, v);
  }
  CHECK(tt.winner() == 0);
  tt.erase(0);
  elems.erase(0);
  CHECK(tt.winner() == argmin_oracle(elems, q.now()));
  CHECK(tt.winner() == 1);
  // insert then delete leaves the winner and leaf set unchanged
  tt.insert(77, poly({Rat(1, 100)}));
  CHECK(tt.winner() == 77);  // dominating element wins immediately
  tt.erase(77);
  CHECK(tt.winner() == 1);
}

TEST_CASE("two-element crossing fires at the root of the value difference") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 0);
  tt.insert(0, poly({Rat(1), Rat(1)}));   // 1 + t
  tt.insert(1, poly({Rat(3), Rat(-1)}));  // 3 - t
  CHECK(tt.winner() == 0);
  auto h = q.advance(Algebraic(Rat(100)));
  REQUIRE(h.has_value());
  CHECK(q.now().compare_rat(Rat(1)) == 0);  // 1+t == 3-t at t=1
  tt.handle_event(q.cert(*h));
  CHECK(tt.winner() == 1);
  CHECK(!q.advance(Algebraic(Rat(100))).has_value());
}

// linear-scan argmin at a rational sample time; evaluation is cheap there
// and the right-limit rule resolves exact ties the same way the tree does.
static uint32_t argmin_at(const std::map<uint32_t, RatPoly>& elems,
                          const Rat& t) {
  Algebraic at{t};
  uint32_t best = kNoPoint;
  for (const auto& [e, v] : elems) {
    if (best == kNoPoint) {
      best = e;
      continue;
    }
    int s = sign_just_after(v - elems.at(best), at);
    if (s < 0 || (s == 0 && e < best)) best = e;
  }
  return best;
}

// A rational instant strictly after `now` and before the next event;
// nullopt while further events share the current instant.
static std::optional<Rat> generic_probe(EventQueue& q) {
  auto nxt = q.peek_time();
  if (!nxt) return q.now().upper() + 1;
  if (Algebraic::compare(*nxt, q.now()) == 0) return std::nullopt;
  return rational_between(q.now(), *nxt);
}

TEST_CASE("kinetic fuzz against the argmin oracle") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 0);
  std::map<uint32_t, RatPoly> elems;
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-6, 6);
  std::uniform_int_distribution<int> op(0, 99);
  uint32_t next_id = 0;
  size_t max_height = 0, max_live = 2;
  Algebraic horizon{Rat(100000)};
  for (int step = 0; step < 1500; ++step) {
    int o = op(rng);
    if ((o < 40 && elems.size() < 80) || elems.empty()) {
      std::vector<Rat> c{Rat(1 + std::abs(coef(rng)) * 8, 1),
                         Rat(coef(rng), 2), Rat(std::abs(coef(rng)), 4)};
      RatPoly v = poly(std::move(c));
      elems.emplace(next_id, v);
      tt.insert(next_id, std::move(v));
      ++next_id;
    } else if (o < 75) {
      auto it = elems.begin();
      std::advance(it, op(rng) % elems.size());
      tt.erase(it->first);
      elems.erase(it);
    } else {
      auto h = q.advance(horizon);
      if (h) tt.handle_event(q.cert(*h));
    }
    max_live = std::max(max_live, elems.size());
    max_height = std::max(max_height, tt.height());
    if (!elems.empty() && step % 8 == 0) {
      if (auto t = generic_probe(q))
        CHECK(tt.winner() == argmin_at(elems, *t));
    }
    if (step % 128 == 0) tt.validate(q.now());
  }
  // structural bound: height within a constant of log2(max size)
  size_t logb = 1;
  while ((size_t(1) << logb) < max_live) ++logb;
  CHECK(max_height <= logb + 3);
}

TEST_CASE("mid-interval certificate validity") {
  SimStats st;
  EventQueue q(Algebraic(Rat(0)));
  TournamentTree tt(&q, &st, 0, 7);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (uint32_t e = 0; e < 32; ++e)
    tt.insert(e, poly({Rat(10 + std::abs(coef(rng)), 1), Rat(coef(rng), 3),
                       Rat(std::abs(coef(rng)), 5)}));
  int events = 0;
  for (;;) {
    auto nxt = q.peek_time();
    if (!nxt || nxt->compare_rat(Rat(50)) > 0) break;
    // validate strictly between now and the next event
    if (Algebraic::compare(*nxt, q.now()) > 0) {
      Rat mid = rational_between(q.now(), *nxt);
      tt.validate(Algebraic(mid));
    }
    auto h = q.advance(Algebraic(Rat(50)));
    REQUIRE(h.has_value());
    tt.handle_event(q.cert(*h));
    ++events;
  }
  CHECK(events > 0);
}
