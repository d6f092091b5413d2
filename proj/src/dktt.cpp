#include "kds/dktt.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace kds {

int TournamentTree::cmp(uint32_t e1, uint32_t e2) const {
  const RatPoly& v1 = elems_.at(e1).value;
  const RatPoly& v2 = elems_.at(e2).value;
  int s = sign_just_after(v2 - v1, queue_->now());
  if (s != 0) return -s;  // v1 smaller just after now -> e1 wins
  return e1 < e2 ? -1 : 1;
}

uint32_t TournamentTree::better(uint32_t e1, uint32_t e2) const {
  if (e1 == kNoPoint) return e2;
  if (e2 == kNoPoint) return e1;
  return cmp(e1, e2) < 0 ? e1 : e2;
}

void TournamentTree::drop_cert(uint32_t v) {
  if (cert_[v] != kNoCert) {
    queue_->deschedule(cert_[v]);
    cert_[v] = kNoCert;
  }
}

void TournamentTree::refresh_cert(uint32_t v) {
  drop_cert(v);
  uint32_t wl = win_[2 * v], wr = win_[2 * v + 1];
  if (wl == kNoPoint || wr == kNoPoint) return;
  uint32_t w = win_[v];
  uint32_t o = w == wl ? wr : wl;
  Certificate c;
  c.kind = CertKind::kTournament;
  c.domain = domain_;
  c.owner = owner_;
  c.a = v;
  c.b = 0;
  uint32_t tw = elems_.at(w).tag, to = elems_.at(o).tag;
  auto key = std::make_pair(std::min(tw, to), std::max(tw, to));
  auto it = cross_cache_.find(key);
  if (it == cross_cache_.end()) {
    it = cross_cache_
             .emplace(key,
                      std::make_shared<const std::vector<Algebraic>>(
                          all_sign_changes(elems_.at(o).value -
                                           elems_.at(w).value)))
             .first;
  }
  static const Rat kTol(1, Int(1) << 40);
  for (const Algebraic& r : *it->second) {
    if (Algebraic::compare(r, queue_->now()) > 0) {
      r.refine_below(kTol);
      c.when = r;
      break;
    }
  }
  cert_[v] = queue_->schedule(std::move(c));
}

void TournamentTree::update_from_leaf(uint32_t heap) {
  bool child_changed = true;
  for (uint32_t v = heap / 2; v >= 1; v /= 2) {
    stats_->visit();
    uint32_t nw = better(win_[2 * v], win_[2 * v + 1]);
    bool changed = nw != win_[v];
    win_[v] = nw;
    if (child_changed) refresh_cert(v);
    if (!changed && !child_changed) break;
    child_changed = changed;
  }
}

void TournamentTree::rebuild(uint32_t new_cap) {
  // collect live elements in deterministic (id) order
  std::vector<uint32_t> live;
  live.reserve(elems_.size());
  for (uint32_t s = 0; s < cap_; ++s)
    if (slot_elem_[s] != kNoPoint) live.push_back(slot_elem_[s]);
  std::sort(live.begin(), live.end());
  for (uint32_t v = 1; v < cap_; ++v) drop_cert(v);

  cap_ = new_cap;
  win_.assign(2 * cap_, kNoPoint);
  cert_.assign(cap_, kNoCert);
  slot_elem_.assign(cap_, kNoPoint);
  free_slots_.clear();
  for (uint32_t s = cap_; s-- > live.size();) free_slots_.push_back(s);
  for (uint32_t i = 0; i < live.size(); ++i) {
    slot_elem_[i] = live[i];
    elems_.at(live[i]).slot = i;
    win_[cap_ + i] = live[i];
  }
  for (uint32_t v = cap_; v-- > 1;) {
    win_[v] = better(win_[2 * v], win_[2 * v + 1]);
    stats_->visit();
  }
  for (uint32_t v = 1; v < cap_; ++v) refresh_cert(v);
}

void TournamentTree::insert(uint32_t elem, uint32_t tag, RatPoly value) {
  assert(!elems_.count(elem));
  elems_.emplace(elem, Elem{0, tag, std::move(value)});
  if (free_slots_.empty()) rebuild(std::max<uint32_t>(1, 2 * cap_));
  uint32_t s = free_slots_.back();
  free_slots_.pop_back();
  slot_elem_[s] = elem;
  elems_.at(elem).slot = s;
  win_[cap_ + s] = elem;
  update_from_leaf(cap_ + s);
}

void TournamentTree::erase(uint32_t elem) {
  auto it = elems_.find(elem);
  if (it == elems_.end())
    throw std::logic_error("tournament erase of absent element");
  uint32_t s = it->second.slot;
  slot_elem_[s] = kNoPoint;
  win_[cap_ + s] = kNoPoint;
  free_slots_.push_back(s);
  elems_.erase(it);
  if (cap_ > 1 && elems_.size() * 4 < cap_)
    rebuild(std::max<uint32_t>(1, cap_ / 2));
  else
    update_from_leaf(cap_ + s);
}

void TournamentTree::clear() {
  for (uint32_t v = 1; v < cap_; ++v) drop_cert(v);
  cross_cache_.clear();
  cap_ = 0;
  win_.clear();
  cert_.clear();
  slot_elem_.clear();
  free_slots_.clear();
  elems_.clear();
}

const RatPoly* TournamentTree::value_of(uint32_t elem) const {
  auto it = elems_.find(elem);
  return it == elems_.end() ? nullptr : &it->second.value;
}

void TournamentTree::handle_event(const Certificate& c) {
  uint32_t v = c.a;
  assert(v >= 1 && v < cap_);
  cert_[v] = kNoCert;  // the fired certificate was retired by the queue
  stats_->visit();
  uint32_t nw = better(win_[2 * v], win_[2 * v + 1]);
  bool changed = nw != win_[v];
  win_[v] = nw;
  refresh_cert(v);
  if (changed && v > 1) {
    bool child_changed = true;
    for (uint32_t u = v / 2; u >= 1; u /= 2) {
      stats_->visit();
      uint32_t w = better(win_[2 * u], win_[2 * u + 1]);
      bool ch = w != win_[u];
      win_[u] = w;
      if (child_changed) refresh_cert(u);
      if (!ch && !child_changed) break;
      child_changed = ch;
    }
  }
}

void TournamentTree::validate(const Algebraic& t) const {
  if (!cap_) return;
  uint32_t best = kNoPoint;
  for (uint32_t s = 0; s < cap_; ++s) {
    uint32_t e = slot_elem_[s];
    if (e == kNoPoint) continue;
    if (best == kNoPoint) {
      best = e;
      continue;
    }
    int sg = sign_just_after(elems_.at(e).value - elems_.at(best).value, t);
    if (sg < 0 || (sg == 0 && e < best)) best = e;
  }
  if (best != win_[1])
    throw std::runtime_error("tournament winner mismatch at sample time");
  for (uint32_t v = 1; v < cap_; ++v) {
    uint32_t wl = win_[2 * v], wr = win_[2 * v + 1];
    uint32_t expect = kNoPoint;
    if (wl == kNoPoint)
      expect = wr;
    else if (wr == kNoPoint)
      expect = wl;
    else {
      int sg = sign_just_after(elems_.at(wr).value - elems_.at(wl).value, t);
      expect = sg > 0 ? wl : sg < 0 ? wr : std::min(wl, wr);
    }
    if (win_[v] != expect)
      throw std::runtime_error("internal tournament node stale");
  }
}

size_t TournamentTree::height() const {
  size_t h = 0;
  for (uint32_t c = cap_; c > 0; c >>= 1) ++h;
  return h;
}

}  // namespace kds
