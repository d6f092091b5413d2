#include "kds/sygraph.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace kds {

SemiYaoKds::SemiYaoKds(const std::vector<Trajectory>* pts,
                       const ConeFamily* family, EventQueue* queue,
                       SimStats* stats)
    : pts_(pts), family_(family), queue_(queue), stats_(stats) {
  if (stats_->order_certs.size() < pts_->size()) stats_->reset_points(pts_->size());
  for (int l = 0; l < family_->size(); ++l) {
    cones_.push_back(std::make_unique<ConeKds>(pts_, family_, l, stats_));
    cones_.back()->set_target_hook(
        [this](int cone, uint32_t w, uint32_t o, uint32_t n) {
          on_target_change(cone, w, o, n);
        });
  }
  gap_cert_.assign(family_->size(),
                   std::vector<std::vector<uint32_t>>(
                       family_->dim() + 1,
                       std::vector<uint32_t>(
                           pts_->size() > 0 ? pts_->size() - 1 : 0, kNoCert)));
}

void SemiYaoKds::set_pair_hook(ConeKds::PairHook h) {
  for (auto& c : cones_) c->set_pair_hook(h);
}

void SemiYaoKds::on_target_change(int cone, uint32_t w, uint32_t oldt,
                                  uint32_t newt) {
  if (oldt != kNoPoint) {
    ++stats_->edge_deletes;
    if (edge_hook_) edge_hook_(cone, w, oldt, false);
  }
  if (newt != kNoPoint) {
    ++stats_->edge_inserts;
    if (edge_hook_) edge_hook_(cone, w, newt, true);
  }
}

void SemiYaoKds::build() {
  for (auto& c : cones_) c->build(queue_->now());
  int d = family_->dim();
  for (int l = 0; l < cone_count(); ++l)
    for (int a = 0; a <= d; ++a)
      for (int64_t g = 0; g + 1 < int64_t(pts_->size()); ++g)
        refresh_gap(l, a, g);
  stats_->settle_certs();
}

void SemiYaoKds::refresh_gap(int cone, int axis, int64_t gap) {
  if (gap < 0 || gap + 1 >= int64_t(pts_->size())) return;
  uint32_t& slot = gap_cert_[cone][axis][gap];
  if (slot != kNoCert) {
    const Certificate& old = queue_->cert(slot);
    stats_->cert_removed(old.a);
    stats_->cert_removed(old.b);
    queue_->deschedule(slot);
    slot = kNoCert;
  }
  ConeKds& ck = *cones_[cone];
  uint32_t a = ck.at_rank(axis, uint32_t(gap));
  uint32_t b = ck.at_rank(axis, uint32_t(gap + 1));
  Certificate c;
  c.kind = axis == family_->dim() ? CertKind::kOrderX : CertKind::kOrderU;
  c.cone = int16_t(cone);
  c.axis = int16_t(axis);
  c.a = a;
  c.b = b;
  auto key = std::make_tuple(cone, axis, std::min(a, b), std::max(a, b));
  auto it = root_cache_.find(key);
  if (it == root_cache_.end()) {
    QuadPoly diff = ck.proj(axis, b) - ck.proj(axis, a);
    it = root_cache_
             .emplace(key, std::make_shared<const std::vector<Algebraic>>(
                               all_sign_changes(diff)))
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
  slot = queue_->schedule(std::move(c));
  stats_->cert_added(a);
  stats_->cert_added(b);
}

void SemiYaoKds::clear_gap_handle(int cone, int axis, int64_t gap) {
  if (gap < 0 || gap + 1 >= int64_t(pts_->size())) return;
  gap_cert_[cone][axis][gap] = kNoCert;
}

void SemiYaoKds::handle_order_event(const Certificate& c) {
  int l = c.cone, axis = c.axis;
  uint32_t p = c.a, q = c.b;
  ConeKds& ck = *cones_[l];
  assert(ck.rank(axis, q) == ck.rank(axis, p) + 1);
  int64_t g = ck.rank(axis, p);
  // The fired certificate was retired by the queue; drop our handle before
  // rescheduling can reuse its slot.
  gap_cert_[l][axis][g] = kNoCert;
  stats_->cert_removed(p);
  stats_->cert_removed(q);

  if (axis < family_->dim()) {
    ++stats_->events_u;
    ck.u_swap(axis, p, q);
  } else {
    ++stats_->events_x;
    auto plan = ck.x_swap_prepare(p, q);
    if (pre_xswap_) pre_xswap_(l, p, q);
    ck.swap_adjacent_ranks(axis, p, q);
    if (post_xswap_) post_xswap_(l, p, q);
    ck.x_swap_commit(p, q, plan);
    for (uint32_t w : ck.x_swap_witnesses(p, plan)) {
      assert(w != p && w != q);
      ck.retarget(w, p, q);
    }
  }
  refresh_gap(l, axis, g - 1);
  refresh_gap(l, axis, g);
  refresh_gap(l, axis, g + 1);
}

std::vector<std::vector<uint32_t>> SemiYaoKds::snapshot() const {
  std::vector<std::vector<uint32_t>> t(pts_->size(),
                                       std::vector<uint32_t>(cone_count()));
  for (size_t w = 0; w < pts_->size(); ++w)
    for (int l = 0; l < cone_count(); ++l)
      t[w][l] = cones_[l]->target(uint32_t(w));
  return t;
}

std::vector<std::pair<uint32_t, uint32_t>> SemiYaoKds::undirected_edges()
    const {
  std::vector<std::pair<uint32_t, uint32_t>> e;
  for (size_t w = 0; w < pts_->size(); ++w)
    for (int l = 0; l < cone_count(); ++l) {
      uint32_t t = cones_[l]->target(uint32_t(w));
      if (t == kNoPoint) continue;
      e.emplace_back(std::min<uint32_t>(w, t), std::max<uint32_t>(w, t));
    }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

void SemiYaoKds::validate_certificates(const Algebraic& t) const {
  int d = family_->dim();
  for (int l = 0; l < cone_count(); ++l) {
    const ConeKds& ck = *cones_[l];
    for (int a = 0; a <= d; ++a)
      for (size_t g = 0; g + 1 < pts_->size(); ++g) {
        uint32_t x = ck.at_rank(a, uint32_t(g));
        uint32_t y = ck.at_rank(a, uint32_t(g + 1));
        if (ck.order_cmp(a, x, y, t) >= 0)
          throw std::runtime_error("order certificate violated mid-interval");
      }
  }
}

void SemiYaoKds::audit_full() const {
  // The incremental state is valid on the open interval up to the next
  // event; rebuilding at a rational instant inside it is equivalent and
  // keeps the reference build on the cached-value sort path.
  Algebraic at = queue_->now();
  auto nxt = queue_->peek_time();
  if (nxt) {
    if (Algebraic::compare(*nxt, at) > 0)
      at = Algebraic(rational_between(at, *nxt));
    // mid-cascade: audit at the exact instant
  } else if (!at.is_rational()) {
    at = Algebraic(at.upper() + 1);  // order is constant past the last event
  }
  for (const auto& c : cones_) c->audit_against_rebuild(at);
  // Locality: every point sits in at most 2 certificates per sorted list.
  uint32_t bound = 2u * cone_count() * (family_->dim() + 1);
  for (uint32_t n : stats_->order_certs)
    if (n > bound) throw std::runtime_error("locality bound exceeded");
}

}  // namespace kds
