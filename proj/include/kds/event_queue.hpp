#pragma once

#include "kds/algebraic.hpp"
#include "kds/stats.hpp"

#include <cassert>
#include <optional>
#include <queue>
#include <tuple>
#include <vector>

namespace kds {

enum class CertKind : uint8_t { kOrderU = 0, kOrderX = 1, kTournament = 2 };

// A scheduled boolean predicate with a polynomial failure function. Order
// certificates certify adjacency (a before b) in one sorted list; tournament
// certificates certify a winner inside one tournament node.
struct Certificate {
  CertKind kind = CertKind::kOrderU;
  int16_t cone = -1;
  int16_t axis = -1;  // 0..d-1 = u_i, d = x_l
  uint32_t a = 0;     // order: lower-rank point; tournament: tree node index
  uint32_t b = 0;     // order: higher-rank point
  uint8_t domain = 0;  // tournament: 0 = nearest-neighbor, 1 = eps-candidates
  uint32_t owner = 0;  // tournament: owning point
  std::optional<Algebraic> when;
  uint64_t version = 0;
  bool live = false;

  // Total deterministic order for simultaneous events.
  std::tuple<int, int, int, uint64_t, uint64_t> tiebreak() const {
    if (kind == CertKind::kTournament)
      return {int(kind), int(domain), int(owner), a, b};
    uint32_t lo = a < b ? a : b, hi = a < b ? b : a;
    return {int(kind), int(cone), int(axis), lo, hi};
  }
};

// Global priority queue of certificate failure times. Pop order is total and
// deterministic: exact time comparison first, then the tiebreak key. Stale
// entries (descheduled or rescheduled certificates) are skipped lazily.
class EventQueue {
 public:
  explicit EventQueue(Algebraic start) : now_(std::move(start)) {}

  uint32_t schedule(Certificate c) {
    uint32_t h;
    if (!free_.empty()) {
      h = free_.back();
      free_.pop_back();
    } else {
      h = uint32_t(slots_.size());
      slots_.emplace_back();
    }
    c.version = ++version_counter_;
    c.live = true;
    if (c.when) {
      assert(Algebraic::compare(*c.when, now_) >= 0);
      heap_.push(Entry{*c.when, c.tiebreak(), h, c.version});
    }
    slots_[h] = std::move(c);  // parked when no failure time
    ++live_;
    return h;
  }

  void deschedule(uint32_t h) {
    assert(slots_[h].live);
    slots_[h].live = false;
    free_.push_back(h);
    --live_;
  }

  const Certificate& cert(uint32_t h) const { return slots_[h]; }

  // Pops the next event with time <= horizon; the popped certificate is
  // retired (owner schedules replacements). Advances the current time.
  std::optional<uint32_t> advance(const Algebraic& horizon) {
    while (!heap_.empty()) {
      const Entry& top = heap_.top();
      const Certificate& c = slots_[top.handle];
      if (!c.live || c.version != top.version) {
        heap_.pop();
        continue;
      }
      if (Algebraic::compare(top.t, horizon) > 0) return std::nullopt;
      assert(Algebraic::compare(top.t, now_) >= 0);
      now_ = top.t;
      uint32_t h = top.handle;
      heap_.pop();
      slots_[h].live = false;
      free_.push_back(h);
      --live_;
      return h;
    }
    return std::nullopt;
  }

  // Failure time of the next live certificate, if any.
  std::optional<Algebraic> peek_time() {
    while (!heap_.empty()) {
      const Entry& top = heap_.top();
      const Certificate& c = slots_[top.handle];
      if (!c.live || c.version != top.version) {
        heap_.pop();
        continue;
      }
      return top.t;
    }
    return std::nullopt;
  }

  const Algebraic& now() const { return now_; }
  void set_now(Algebraic t) {
    assert(Algebraic::compare(t, now_) >= 0);
    now_ = std::move(t);
  }
  size_t live_count() const { return live_; }

 private:
  struct Entry {
    Algebraic t;
    std::tuple<int, int, int, uint64_t, uint64_t> key;
    uint32_t handle;
    uint64_t version;
  };
  struct Later {
    bool operator()(const Entry& x, const Entry& y) const {
      int c = Algebraic::compare(x.t, y.t);
      if (c != 0) return c > 0;
      return x.key > y.key;
    }
  };

  std::vector<Certificate> slots_;
  std::vector<uint32_t> free_;
  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  Algebraic now_;
  uint64_t version_counter_ = 0;
  size_t live_ = 0;
};

}  // namespace kds
