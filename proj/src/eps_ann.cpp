#include "kds/eps_ann.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

namespace kds {

namespace {

// cos^2(pi/den) brackets for the grid angles beyond exact quadratic reach.
bool cos2_bounds(int den, Rat& lo, Rat& hi) {
  auto mk = [&](long long v) {
    lo = Rat(Int(v), Int(1000000000000000000LL));
    hi = Rat(Int(v + 1), Int(1000000000000000000LL));
  };
  switch (den) {
    case 16: mk(961939766255643378LL); return true;
    case 24: mk(982962913144534143LL); return true;
    case 32: mk(990392640201615224LL); return true;
    case 48: mk(995722430686905196LL); return true;
    case 64: mk(997592363336098443LL); return true;
    default: return false;
  }
}

// Exact test of 1/(2 cos θ - 1) <= 1 + eps, i.e. 4 (1+eps)^2 cos^2 θ >= (2+eps)^2
// together with cos θ > 1/2.
bool bound_holds(int den, const Rat& eps) {
  Rat lhs_scale = 4 * (1 + eps) * (1 + eps);
  Rat rhs = (2 + eps) * (2 + eps);
  Angle a{1, den};
  if (ConeFamily::supported(a)) {
    Quad c2 = ConeFamily::cos2(a);
    if ((c2 - Quad(Rat(1, 4))).sgn() <= 0) return false;  // theta >= pi/3
    return (c2 * Quad(lhs_scale) - Quad(rhs)).sgn() >= 0;
  }
  Rat lo, hi;
  if (!cos2_bounds(den, lo, hi)) return false;
  if (lhs_scale * lo >= rhs) return true;
  if (lhs_scale * hi < rhs) return false;
  throw std::logic_error("cos^2 bracket too coarse for eps bound");
}

}  // namespace

Angle theta_for_eps(const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  // Generous eps: the pi/3 family already satisfies the guarantee with slack;
  // the formula's own threshold at pi/4 is 1 + sqrt(2).
  if (eps * eps >= 2) return Angle{1, 3};
  static const int kGrid[] = {4, 6, 8, 12, 16, 24, 32, 48, 64};
  for (int den : kGrid)
    if (bound_holds(den, eps)) return Angle{1, den};
  throw std::invalid_argument(
      "eps requires a cone angle below pi/64; choose eps >= 1/256 or so");
}

EpsAnnKds::EpsAnnKds(const std::vector<Trajectory>* pts,
                     const ConeFamily* family, EventQueue* queue,
                     SimStats* stats)
    : pts_(pts), family_(family), queue_(queue), stats_(stats) {
  if (stats_->inc_updates.size() < pts_->size())
    stats_->reset_points(pts_->size());
  size_t n = pts_->size();
  int c = family_->size();
  pairs_.resize(c);
  rnodes_.resize(c);
  nl_.assign(n, std::vector<uint32_t>(c, kNoPoint));
  for (uint32_t p = 0; p < n; ++p)
    cand_tt_.push_back(
        std::make_unique<TournamentTree>(queue_, stats_, 1, p));
}

void EpsAnnKds::attach(SemiYaoKds& sy) {
  sy_ = &sy;
  size_t n = pts_->size();
  int c = family_->size();
  cands_.clear();
  cands_.reserve(n);
  for (uint32_t p = 0; p < n; ++p) {
    std::vector<CandMap> row;
    row.reserve(c);
    for (int l = 0; l < c; ++l)
      row.emplace_back(XRankLess{&sy.cone_kds(l)});
    cands_.push_back(std::move(row));
  }
  // Initial pairs from the built trees: every r-carrying node is tracked so
  // that later r-side hooks find consistent reverse-index state.
  for (int l = 0; l < c; ++l) {
    const ConeKds& ck = sy.cone_kds(l);
    ck.for_each_r([&](uint64_t node, uint32_t r) {
      pairs_[l][node].r = r;
      rnodes_[l][r].push_back(node);
    });
    ck.for_each_pair([&](uint64_t node, uint32_t b, uint32_t r) {
      pairs_[l][node].b = b;
      if (b != kNoPoint && r != kNoPoint) cand_add(b, l, r);
    });
  }
  for (uint32_t p = 0; p < n; ++p)
    for (int l = 0; l < c; ++l) refresh_head(p, l);
  sy.set_pair_hook([this](int cone, uint64_t node, char side, uint32_t o,
                          uint32_t nv) { on_pair_change(cone, node, side, o, nv); });
  sy.set_xswap_hooks(
      [this](int cone, uint32_t p, uint32_t q) { pre_xswap(cone, p, q); },
      [this](int cone, uint32_t p, uint32_t q) { post_xswap(cone, p, q); });
}

void EpsAnnKds::cand_add(uint32_t owner, int cone, uint32_t member) {
  stats_->visit();
  ++cands_[owner][cone][member];
}

void EpsAnnKds::cand_remove(uint32_t owner, int cone, uint32_t member) {
  stats_->visit();
  auto& m = cands_[owner][cone];
  auto it = m.find(member);
  assert(it != m.end());
  if (--it->second == 0) m.erase(it);
}

void EpsAnnKds::refresh_head(uint32_t owner, int cone) {
  const auto& m = cands_[owner][cone];
  uint32_t head = m.empty() ? kNoPoint : m.begin()->first;
  uint32_t& cur = nl_[owner][cone];
  if (head == cur) return;
  stats_->visit();
  TournamentTree& tt = *cand_tt_[owner];
  if (cur != kNoPoint) tt.erase(uint32_t(cone));
  cur = head;
  if (head != kNoPoint)
    tt.insert(uint32_t(cone), head,
              squared_distance_poly((*pts_)[owner], (*pts_)[head]));
}

void EpsAnnKds::on_pair_change(int cone, uint64_t node, char side,
                               uint32_t oldv, uint32_t newv) {
  auto& m = pairs_[cone];
  auto it = m.find(node);
  if (it == m.end()) {
    // Never-seen node: the other side reflects its committed state.
    PairRec rec;
    if (side == 'r')
      rec.b = sy_->cone_kds(cone).node_b(node);
    else
      rec.r = sy_->cone_kds(cone).node_r(node);
    it = m.emplace(node, rec).first;
  }
  PairRec& rec = it->second;
  if (side == 'r') {
    assert(rec.r == oldv || rec.r == kNoPoint);
    if (oldv != kNoPoint) {
      auto& vec = rnodes_[cone][oldv];
      vec.erase(std::find(vec.begin(), vec.end(), node));
      if (rec.b != kNoPoint) cand_remove(rec.b, cone, oldv);
    }
    rec.r = newv;
    if (newv != kNoPoint) {
      rnodes_[cone][newv].push_back(node);
      if (rec.b != kNoPoint) cand_add(rec.b, cone, newv);
    }
    if (rec.b != kNoPoint) refresh_head(rec.b, cone);
  } else {
    assert(side == 'b');
    assert(rec.b == oldv || rec.b == kNoPoint);
    if (rec.r != kNoPoint) {
      if (oldv != kNoPoint) {
        cand_remove(oldv, cone, rec.r);
        refresh_head(oldv, cone);
      }
      rec.b = newv;
      if (newv != kNoPoint) {
        cand_add(newv, cone, rec.r);
        refresh_head(newv, cone);
      }
    } else {
      rec.b = newv;
    }
  }
  if (rec.b == kNoPoint && rec.r == kNoPoint) m.erase(it);
}

void EpsAnnKds::pre_xswap(int cone, uint32_t p, uint32_t q) {
  assert(pending_.empty());
  pending_cone_ = cone;
  pending_p_ = p;
  pending_q_ = q;
  // Owners whose candidate list holds both p and q must pull the two out
  // while the old ranks still match the stored order.
  auto owners_of = [&](uint32_t z) {
    std::set<uint32_t> owners;
    auto it = rnodes_[cone].find(z);
    if (it != rnodes_[cone].end())
      for (uint64_t node : it->second) {
        auto pit = pairs_[cone].find(node);
        if (pit != pairs_[cone].end() && pit->second.b != kNoPoint)
          owners.insert(pit->second.b);
      }
    return owners;
  };
  std::set<uint32_t> op = owners_of(p), oq = owners_of(q);
  for (uint32_t w : op) {
    if (!oq.count(w)) continue;
    auto& m = cands_[w][cone];
    auto ip = m.find(p);
    auto iq = m.find(q);
    assert(ip != m.end() && iq != m.end());
    pending_.emplace_back(w, ip->second, iq->second);
    m.erase(ip);
    m.erase(iq);
  }
}

void EpsAnnKds::post_xswap(int cone, uint32_t p, uint32_t q) {
  assert(cone == pending_cone_ && p == pending_p_ && q == pending_q_);
  for (auto& [w, cp, cq] : pending_) {
    auto& m = cands_[w][cone];
    m[p] = cp;
    m[q] = cq;
    refresh_head(w, cone);
  }
  pending_.clear();
  pending_cone_ = -1;
  pending_p_ = pending_q_ = kNoPoint;
}

void EpsAnnKds::handle_event(const Certificate& c) {
  assert(c.domain == 1);
  cand_tt_[c.owner]->handle_event(c);
}

uint32_t EpsAnnKds::eps_nearest(uint32_t p) const {
  uint32_t l = cand_tt_[p]->winner();
  if (l == kNoPoint) return kNoPoint;
  return nl_[p][l];
}

std::vector<uint32_t> EpsAnnKds::table() const {
  std::vector<uint32_t> t(pts_->size());
  for (uint32_t p = 0; p < pts_->size(); ++p) t[p] = eps_nearest(p);
  return t;
}

size_t EpsAnnKds::edge_count() const {
  std::set<std::pair<uint32_t, uint32_t>> edges;
  for (const auto& m : pairs_)
    for (const auto& [node, rec] : m)
      if (rec.b != kNoPoint && rec.r != kNoPoint)
        edges.emplace(std::min(rec.b, rec.r), std::max(rec.b, rec.r));
  return edges.size();
}

size_t EpsAnnKds::max_degree() const {
  std::set<std::pair<uint32_t, uint32_t>> edges;
  for (const auto& m : pairs_)
    for (const auto& [node, rec] : m)
      if (rec.b != kNoPoint && rec.r != kNoPoint && rec.b != rec.r)
        edges.emplace(std::min(rec.b, rec.r), std::max(rec.b, rec.r));
  std::vector<size_t> deg(pts_->size(), 0);
  size_t best = 0;
  for (auto& [a, b] : edges) {
    best = std::max({best, ++deg[a], ++deg[b]});
  }
  return best;
}

void EpsAnnKds::audit_lists() const {
  int c = family_->size();
  for (int l = 0; l < c; ++l) {
    const ConeKds& ck = sy_->cone_kds(l);
    // expected multiset per owner
    std::vector<std::map<uint32_t, int>> expect(pts_->size());
    ck.for_each_pair([&](uint64_t, uint32_t b, uint32_t r) {
      if (b != kNoPoint && r != kNoPoint) ++expect[b][r];
    });
    for (uint32_t p = 0; p < pts_->size(); ++p) {
      const auto& m = cands_[p][l];
      if (m.size() != expect[p].size())
        throw std::runtime_error("eps candidate list size mismatch");
      for (const auto& [member, count] : m) {
        auto it = expect[p].find(member);
        if (it == expect[p].end() || it->second != count)
          throw std::runtime_error("eps candidate multiset mismatch");
      }
      uint32_t head = m.empty() ? kNoPoint : m.begin()->first;
      if (head != nl_[p][l])
        throw std::runtime_error("eps candidate head stale");
    }
  }
}

void EpsAnnKds::validate(const Algebraic& t) const {
  for (const auto& tt : cand_tt_) tt->validate(t);
}

}  // namespace kds
